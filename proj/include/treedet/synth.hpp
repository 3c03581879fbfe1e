#pragma once

#include <cstdint>

#include "treedet/fta.hpp"

namespace treedet {

// "Typed lists" scaling family: k element types t_1..t_k (constants
// c_1..c_k), per-type list states l_1..l_k over nil/cons, plus the
// universal any-state with its per-symbol transitions. The determinised
// state count grows linearly in k while the completed explicit transition
// count grows quadratically.
Fta synth_family(uint32_t k);

}  // namespace treedet
