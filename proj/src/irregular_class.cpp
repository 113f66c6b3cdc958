#include "twild/irregular_class.hpp"

#include <stdexcept>

namespace twild {

IrregularClass::IrregularClass(std::vector<ClassEntry> entries, std::string twist)
    : entries_(std::move(entries)), twist_(std::move(twist)) {
  if (entries_.empty()) throw std::invalid_argument("irregular class has no circles");
  for (std::size_t a = 0; a < entries_.size(); ++a) {
    const auto& e = entries_[a];
    if (e.mult <= 0)
      throw std::invalid_argument("circle " + std::to_string(a) + " has multiplicity " + std::to_string(e.mult) +
                                  "; multiplicities must be positive");
    for (std::size_t b = 0; b < a; ++b)
      if (same_circle(entries_[b].circle.representative(), e.circle.representative()))
        throw std::invalid_argument("circles " + std::to_string(b) + " and " + std::to_string(a) +
                                    " are the same Galois orbit");
    rank_ += e.mult * e.circle.ram();
  }
}

Mode IrregularClass::mode() const {
  for (const auto& e : entries_)
    if (e.circle.mode() == Mode::Numeric) return Mode::Numeric;
  return Mode::Exact;
}

}  // namespace twild
