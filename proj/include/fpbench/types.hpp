#pragma once

#include <vector>

namespace fpbench {

using Vector = std::vector<double>;
/// One feature vector per row.
using Samples = std::vector<Vector>;
/// Class indices 0..3.
using Labels = std::vector<int>;

}  // namespace fpbench
