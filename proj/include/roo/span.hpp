#pragma once

#include <cstddef>
#include <string>

namespace roo {

/// Half-open byte range [start, end) in a labelled source text.
/// line and column are 1-based and refer to `start`.
struct SourceSpan {
  std::string file;
  std::size_t start = 0;
  std::size_t end = 0;
  std::size_t line = 1;
  std::size_t column = 1;
};

}  // namespace roo
