#pragma once

#include "lexdiar/affinity.hpp"

namespace lexdiar {

// Element-wise max of the acoustic and lexical adjacency matrices.
AffinityMatrix combine_max(const AffinityMatrix& acoustic, const AffinityMatrix& lexical);

}  // namespace lexdiar
