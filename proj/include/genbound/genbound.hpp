#pragma once

#include "genbound/bounds.hpp"
#include "genbound/case_study.hpp"
#include "genbound/channel.hpp"
#include "genbound/errors.hpp"
#include "genbound/experiments.hpp"
#include "genbound/matrix.hpp"
#include "genbound/qfunc.hpp"
#include "genbound/quadrature.hpp"
#include "genbound/report.hpp"
#include "genbound/rng.hpp"
#include "genbound/sdpi.hpp"
