#include "lexdiar/fusion.hpp"

#include "lexdiar/errors.hpp"

namespace lexdiar {

AffinityMatrix combine_max(const AffinityMatrix& acoustic, const AffinityMatrix& lexical) {
  if (acoustic.rows() != lexical.rows() || acoustic.cols() != lexical.cols()) {
    throw InvalidInput("cannot fuse " + std::to_string(acoustic.rows()) + "x" +
                       std::to_string(acoustic.cols()) + " with " + std::to_string(lexical.rows()) +
                       "x" + std::to_string(lexical.cols()));
  }
  return acoustic.cwiseMax(lexical);
}

}  // namespace lexdiar
