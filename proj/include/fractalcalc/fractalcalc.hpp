#pragma once

#include "fractalcalc/errors.hpp"
#include "fractalcalc/special_functions.hpp"
#include "fractalcalc/fractal_support.hpp"
#include "fractalcalc/staircase_coords.hpp"
#include "fractalcalc/local_calculus.hpp"
#include "fractalcalc/nonlocal_operators.hpp"
#include "fractalcalc/transforms.hpp"
#include "fractalcalc/io.hpp"
#include "fractalcalc/verification.hpp"
#include "fractalcalc/suites.hpp"
#include "fractalcalc/report.hpp"
