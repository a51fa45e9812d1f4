#pragma once

#include "errors.hpp"
#include "kernel.hpp"
#include "gauss_kronrod.hpp"
#include "quadrature.hpp"
#include "np_comparator.hpp"
#include "pmf.hpp"
#include "parallel.hpp"
#include "epi.hpp"
#include "serialization.hpp"
#include "acceptance.hpp"
#include "report.hpp"
