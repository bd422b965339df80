#ifndef CDALG_BASIS_TABLE_HPP
#define CDALG_BASIS_TABLE_HPP

#include <cstdint>
#include <vector>

#include "cdalg/errors.hpp"

namespace cdalg {

/// Level r of the Cayley-Dickson tower; the algebra has dimension 2^r.
class AlgebraLevel {
 public:
  static constexpr int kMaxR = 8;
  static constexpr int kDefaultR = 3;

  AlgebraLevel() = default;
  explicit AlgebraLevel(int r) : r_(r) {
    if (r < 1 || r > kMaxR) {
      throw Error(ErrorKind::invalid_level,
                  "algebra level r=" + std::to_string(r) +
                      " outside supported range 1..8");
    }
  }

  int r() const noexcept { return r_; }
  int dim() const noexcept { return 1 << r_; }

  friend bool operator==(AlgebraLevel, AlgebraLevel) = default;

 private:
  int r_ = kDefaultR;
};

/**
 * Multiplication table of the basis units i_0 = 1, i_1, ..., i_{2^r-1}.
 *
 * Built once per level by repeated doubling from the reals, using
 * (a + b l)(c + d l) = (ac - d~ b) + (d a + b c~) l with the convention
 * i_{2^{r-1}+m} = i_m l. Entries are exact: every product of basis units is
 * a signed basis unit.
 */
class BasisTable {
 public:
  struct Entry {
    std::int8_t sign;
    std::uint16_t index;
  };

  /// Shared immutable table for a level; thread-safe.
  static const BasisTable& for_level(AlgebraLevel level);

  AlgebraLevel level() const noexcept { return level_; }
  int dim() const noexcept { return level_.dim(); }

  Entry operator()(int a, int b) const noexcept {
    return entries_[static_cast<std::size_t>(a) * dim() + b];
  }

 private:
  BasisTable(AlgebraLevel level, bool sign_fault);

  AlgebraLevel level_;
  std::vector<Entry> entries_;
};

namespace debug {
/// Mutation hook for the selftest: flips the sign of i_1 i_2 (or i_1 i_1 at
/// r = 1) in every table handed out while enabled.
void set_basis_sign_fault(bool enabled);
bool basis_sign_fault();
}  // namespace debug

}  // namespace cdalg

#endif
