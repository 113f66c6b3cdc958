#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "twild/exponent.hpp"

namespace twild {

struct ClassEntry {
  CircleClass circle;
  std::int64_t mult;
};

/// A GL_N irregular class: distinct circles with positive multiplicities.
class IrregularClass {
 public:
  /// Throws std::invalid_argument on a nonpositive multiplicity or on two
  /// entries lying on the same circle.
  explicit IrregularClass(std::vector<ClassEntry> entries, std::string twist = "id");

  const std::vector<ClassEntry>& entries() const { return entries_; }
  const std::string& twist() const { return twist_; }
  /// N = sum of mult * ram.
  std::int64_t rank() const { return rank_; }
  Mode mode() const;

 private:
  std::vector<ClassEntry> entries_;
  std::string twist_;
  std::int64_t rank_ = 0;
};

}  // namespace twild
