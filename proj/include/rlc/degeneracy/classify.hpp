#pragma once

#include "rlc/degeneracy/extendibility.hpp"

namespace rlc {

// Transversality class and the flatness flags. Conformal III-flatness is tested on the
// II-flat representative produced by flatten_II.
Classification classify(const MetricChart& M);

}  // namespace rlc
