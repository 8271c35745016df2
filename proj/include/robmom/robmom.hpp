#pragma once

#include "robmom/error.hpp"
#include "robmom/numeric.hpp"
#include "robmom/kernels.hpp"
#include "robmom/lstat.hpp"
#include "robmom/pseudosample.hpp"
#include "robmom/estimators.hpp"
#include "robmom/distributions.hpp"
#include "robmom/verify.hpp"
#include "robmom/report.hpp"
