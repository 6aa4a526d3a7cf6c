#pragma once

#include "gbrw/basis.hpp"
#include "gbrw/beta_family.hpp"
#include "gbrw/builtins.hpp"
#include "gbrw/core.hpp"
#include "gbrw/dyadic.hpp"
#include "gbrw/ergodicity.hpp"
#include "gbrw/index_set.hpp"
#include "gbrw/linear_expansion.hpp"
#include "gbrw/moments.hpp"
#include "gbrw/report.hpp"
#include "gbrw/rule.hpp"
#include "gbrw/rule_spec.hpp"
#include "gbrw/set_sequence.hpp"
#include "gbrw/truth_table.hpp"
#include "gbrw/walk_sim.hpp"
