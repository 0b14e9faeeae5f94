#pragma once

#include "pointrat/error.hpp"
#include "pointrat/interval.hpp"
#include "pointrat/piecewise.hpp"
#include "pointrat/density.hpp"
#include "pointrat/choice_belief.hpp"
#include "pointrat/composite.hpp"
#include "pointrat/family.hpp"
#include "pointrat/game.hpp"
#include "pointrat/quadrature.hpp"
#include "pointrat/golden_section.hpp"
#include "pointrat/solver.hpp"
#include "pointrat/closed_forms.hpp"
#include "pointrat/verify/report.hpp"
#include "pointrat/verify/sampling.hpp"
#include "pointrat/verify/assumptions.hpp"
#include "pointrat/verify/expectation.hpp"
#include "pointrat/verify/oracle.hpp"
