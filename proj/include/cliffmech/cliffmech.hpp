#pragma once

#include "cliffmech/rational.hpp"
#include "cliffmech/errors.hpp"
#include "cliffmech/structure.hpp"
#include "cliffmech/forms.hpp"
#include "cliffmech/expression.hpp"
#include "cliffmech/linalg.hpp"
#include "cliffmech/dynamics.hpp"
#include "cliffmech/fixtures.hpp"
#include "cliffmech/reports.hpp"
