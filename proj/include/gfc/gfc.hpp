#pragma once

// Everything at once.

#include "gfc/battery.hpp"
#include "gfc/calculus.hpp"
#include "gfc/config.hpp"
#include "gfc/delta.hpp"
#include "gfc/dual.hpp"
#include "gfc/equivalence.hpp"
#include "gfc/error.hpp"
#include "gfc/fourier.hpp"
#include "gfc/inputs.hpp"
#include "gfc/kernels.hpp"
#include "gfc/mollifier.hpp"
#include "gfc/multi_index.hpp"
#include "gfc/pdo.hpp"
#include "gfc/quadrature.hpp"
#include "gfc/report.hpp"
#include "gfc/scale_ladder.hpp"
#include "gfc/smooth_family.hpp"
#include "gfc/solutions.hpp"
#include "gfc/verdict.hpp"
