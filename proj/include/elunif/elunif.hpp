#pragma once

#include "elunif/analysis.hpp"
#include "elunif/dag_solved.hpp"
#include "elunif/error.hpp"
#include "elunif/flat_index.hpp"
#include "elunif/problem.hpp"
#include "elunif/semantics.hpp"
#include "elunif/slmo.hpp"
#include "elunif/solver_goal.hpp"
#include "elunif/solver_guess.hpp"
#include "elunif/subsumption.hpp"
#include "elunif/symbols.hpp"
#include "elunif/syntax.hpp"
#include "elunif/tbox.hpp"
#include "elunif/term.hpp"
