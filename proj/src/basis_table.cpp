#include "cdalg/basis_table.hpp"

#include <array>
#include <atomic>
#include <memory>
#include <mutex>

namespace cdalg {

namespace {

std::atomic<bool> g_sign_fault{false};

// Table for level r computed from the table for level r - 1 (level 0 = reals).
std::vector<BasisTable::Entry> double_table(
    const std::vector<BasisTable::Entry>& lower, int lower_dim) {
  const int half = lower_dim;
  const int dim = 2 * half;
  std::vector<BasisTable::Entry> out(static_cast<std::size_t>(dim) * dim);
  auto low = [&](int a, int b) {
    return lower[static_cast<std::size_t>(a) * half + b];
  };
  auto conj_sign = [](int idx) { return idx == 0 ? 1 : -1; };

  for (int a = 0; a < dim; ++a) {
    for (int b = 0; b < dim; ++b) {
      BasisTable::Entry e{};
      if (a < half && b < half) {
        // alpha gamma
        e = low(a, b);
      } else if (a < half) {
        // (delta alpha) l
        const auto p = low(b - half, a);
        e.sign = p.sign;
        e.index = static_cast<std::uint16_t>(p.index + half);
      } else if (b < half) {
        // (beta gamma~) l
        const auto p = low(a - half, b);
        e.sign = static_cast<std::int8_t>(p.sign * conj_sign(b));
        e.index = static_cast<std::uint16_t>(p.index + half);
      } else {
        // -(delta~ beta)
        const auto p = low(b - half, a - half);
        e.sign = static_cast<std::int8_t>(-p.sign * conj_sign(b - half));
        e.index = p.index;
      }
      out[static_cast<std::size_t>(a) * dim + b] = e;
    }
  }
  return out;
}

}  // namespace

BasisTable::BasisTable(AlgebraLevel level, bool sign_fault) : level_(level) {
  std::vector<Entry> table{Entry{1, 0}};
  int dim = 1;
  for (int r = 1; r <= level.r(); ++r) {
    table = double_table(table, dim);
    dim *= 2;
  }
  entries_ = std::move(table);
  if (sign_fault) {
    const std::size_t at = dim >= 4 ? static_cast<std::size_t>(dim) + 2
                                    : static_cast<std::size_t>(dim) + 1;
    entries_[at].sign = static_cast<std::int8_t>(-entries_[at].sign);
  }
}

const BasisTable& BasisTable::for_level(AlgebraLevel level) {
  static std::mutex mutex;
  static std::array<std::unique_ptr<BasisTable>, AlgebraLevel::kMaxR + 1>
      clean;
  static std::array<std::unique_ptr<BasisTable>, AlgebraLevel::kMaxR + 1>
      faulty;

  const bool fault = g_sign_fault.load(std::memory_order_relaxed);
  std::lock_guard lock(mutex);
  auto& slot = fault ? faulty[level.r()] : clean[level.r()];
  if (!slot) slot.reset(new BasisTable(level, fault));
  return *slot;
}

namespace debug {
void set_basis_sign_fault(bool enabled) { g_sign_fault.store(enabled); }
bool basis_sign_fault() { return g_sign_fault.load(); }
}  // namespace debug

}  // namespace cdalg
