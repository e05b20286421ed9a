#include "esst/logic/simplex.hpp"

#include <algorithm>
#include <cassert>
#include <optional>
#include <unordered_map>

namespace esst::logic {

namespace {

/// c + k*delta for an infinitesimal delta > 0.
struct DeltaValue {
  Rational c = 0;
  Rational k = 0;

  friend bool operator<(const DeltaValue& a, const DeltaValue& b) {
    return a.c < b.c || (a.c == b.c && a.k < b.k);
  }
  friend bool operator>(const DeltaValue& a, const DeltaValue& b) { return b < a; }
  friend bool operator<=(const DeltaValue& a, const DeltaValue& b) { return !(b < a); }
  DeltaValue& operator+=(const DeltaValue& o) {
    c += o.c;
    k += o.k;
    return *this;
  }
  friend DeltaValue operator-(const DeltaValue& a, const DeltaValue& b) { return {a.c - b.c, a.k - b.k}; }
  friend DeltaValue operator*(const DeltaValue& a, const Rational& r) { return {a.c * r, a.k * r}; }
};

struct Bound {
  DeltaValue value;
  std::size_t atom;  // index of the originating atom
};

class Tableau {
 public:
  explicit Tableau(std::span<const Atom> atoms) : atoms_(atoms) {
    std::unordered_map<VarId, std::size_t> column_of;
    for (const auto& a : atoms)
      for (const auto& [v, c] : a.term().entries())
        if (column_of.emplace(v, originals_.size()).second) originals_.push_back(v);
    n_ = originals_.size();
    m_ = atoms.size();
    const std::size_t total = n_ + m_;
    value_.assign(total, DeltaValue{});
    lower_.assign(total, std::nullopt);
    upper_.assign(total, std::nullopt);
    row_of_.assign(total, -1);
    rows_.assign(m_, std::vector<Rational>(total, Rational(0)));
    basic_.resize(m_);
    for (std::size_t r = 0; r < m_; ++r) {
      const Atom& a = atoms[r];
      const std::size_t slack = n_ + r;
      basic_[r] = slack;
      row_of_[slack] = static_cast<int>(r);
      for (const auto& [v, c] : a.term().entries()) rows_[r][column_of[v]] = c;
      const Rational bound = -a.term().constant();
      switch (a.rel()) {
        case Rel::Le: upper_[slack] = Bound{{bound, 0}, r}; break;
        case Rel::Lt: upper_[slack] = Bound{{bound, -1}, r}; break;
        case Rel::Eq:
          upper_[slack] = Bound{{bound, 0}, r};
          lower_[slack] = Bound{{bound, 0}, r};
          break;
      }
    }
  }

  ConjunctionResult check() {
    ConjunctionResult result;
    // Trivial conflicts on a single slack (e.g. constant atoms).
    for (;;) {
      int bad_row = -1;
      bool below = false;
      std::size_t best_var = SIZE_MAX;
      for (std::size_t r = 0; r < m_; ++r) {
        const std::size_t b = basic_[r];
        if (lower_[b] && value_[b] < lower_[b]->value) {
          if (b < best_var) { best_var = b; bad_row = static_cast<int>(r); below = true; }
        } else if (upper_[b] && value_[b] > upper_[b]->value) {
          if (b < best_var) { best_var = b; bad_row = static_cast<int>(r); below = false; }
        }
      }
      if (bad_row < 0) break;
      const auto& row = rows_[bad_row];
      const std::size_t b = basic_[bad_row];
      std::size_t pick = SIZE_MAX;
      for (std::size_t j = 0; j < n_ + m_; ++j) {
        if (row_of_[j] >= 0) continue;
        const int s = sgn(row[j]);
        if (s == 0) continue;
        const bool can_increase = !upper_[j] || value_[j] < upper_[j]->value;
        const bool can_decrease = !lower_[j] || lower_[j]->value < value_[j];
        const bool ok = below ? ((s > 0 && can_increase) || (s < 0 && can_decrease))
                              : ((s < 0 && can_increase) || (s > 0 && can_decrease));
        if (ok) { pick = j; break; }
      }
      if (pick == SIZE_MAX) {
        result.sat = false;
        result.certificate = explain(static_cast<std::size_t>(bad_row), below);
        return result;
      }
      pivot_and_update(static_cast<std::size_t>(bad_row), pick, below ? lower_[b]->value : upper_[b]->value);
    }
    result.sat = true;
    result.model = model();
    return result;
  }

 private:
  FarkasCertificate explain(std::size_t r, bool below) {
    std::map<std::size_t, Rational> mu;
    const std::size_t b = basic_[r];
    const auto& row = rows_[r];
    if (below) {
      // lower(b) <= b = sum a_j x_j <= ... < lower(b)
      mu[lower_[b]->atom] -= 1;
      for (std::size_t j = 0; j < n_ + m_; ++j) {
        if (row_of_[j] >= 0 || sgn(row[j]) == 0) continue;
        const Bound& bd = sgn(row[j]) > 0 ? *upper_[j] : *lower_[j];
        mu[bd.atom] += row[j];
      }
    } else {
      mu[upper_[b]->atom] += 1;
      for (std::size_t j = 0; j < n_ + m_; ++j) {
        if (row_of_[j] >= 0 || sgn(row[j]) == 0) continue;
        const Bound& bd = sgn(row[j]) > 0 ? *lower_[j] : *upper_[j];
        mu[bd.atom] -= row[j];
      }
    }
    FarkasCertificate cert;
    for (auto& [idx, m] : mu)
      if (m != 0) cert.multipliers.emplace_back(idx, m);
    return cert;
  }

  void pivot_and_update(std::size_t r, std::size_t j, const DeltaValue& target) {
    const std::size_t b = basic_[r];
    const Rational a = rows_[r][j];
    const DeltaValue theta = (target - value_[b]) * (Rational(1) / a);
    value_[b] = target;
    value_[j] += theta;
    for (std::size_t k = 0; k < m_; ++k) {
      if (k == r) continue;
      const Rational& c = rows_[k][j];
      if (sgn(c) != 0) value_[basic_[k]] += theta * c;
    }
    pivot(r, j);
  }

  void pivot(std::size_t r, std::size_t j) {
    const std::size_t b = basic_[r];
    auto& row = rows_[r];
    const Rational inv = Rational(1) / row[j];
    // x_j = (x_b - sum_{k != j} a_k x_k) / a_j
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (sgn(row[k]) != 0) row[k] = -row[k] * inv;
    }
    row[j] = 0;
    row[b] = inv;
    for (std::size_t k = 0; k < m_; ++k) {
      if (k == r) continue;
      auto& other = rows_[k];
      if (sgn(other[j]) == 0) continue;
      const Rational c = other[j];
      other[j] = 0;
      for (std::size_t col = 0; col < row.size(); ++col)
        if (sgn(row[col]) != 0) other[col] += c * row[col];
    }
    basic_[r] = j;
    row_of_[j] = static_cast<int>(r);
    row_of_[b] = -1;
  }

  Model model() const {
    // Pick a concrete delta small enough for every bound comparison.
    Rational delta = 1;
    auto tighten = [&](const DeltaValue& lo, const DeltaValue& hi) {
      if (lo.c < hi.c && lo.k > hi.k) {
        const Rational d = (hi.c - lo.c) / (lo.k - hi.k);
        if (d < delta) delta = d;
      }
    };
    for (std::size_t v = 0; v < n_ + m_; ++v) {
      if (lower_[v]) tighten(lower_[v]->value, value_[v]);
      if (upper_[v]) tighten(value_[v], upper_[v]->value);
    }
    Model m;
    for (std::size_t i = 0; i < n_; ++i) m[originals_[i]] = value_[i].c + value_[i].k * delta;
    return m;
  }

  std::span<const Atom> atoms_;
  std::vector<VarId> originals_;
  std::size_t n_ = 0;
  std::size_t m_ = 0;
  std::vector<DeltaValue> value_;
  std::vector<std::optional<Bound>> lower_;
  std::vector<std::optional<Bound>> upper_;
  std::vector<int> row_of_;
  std::vector<std::vector<Rational>> rows_;
  std::vector<std::size_t> basic_;
};

}  // namespace

ConjunctionResult solve_conjunction(std::span<const Atom> atoms) {
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (auto v = atoms[i].constant_value(); v && !*v) {
      ConjunctionResult r;
      r.certificate.multipliers.emplace_back(i, Rational(1));
      return r;
    }
  }
  Tableau t(atoms);
  ConjunctionResult r = t.check();
  assert(r.sat || verify_certificate(atoms, r.certificate));
  return r;
}

ConjunctionResult check_conjunction(std::span<const Atom> input) {
  std::vector<Atom> atoms(input.begin(), input.end());
  std::sort(atoms.begin(), atoms.end());
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
  std::vector<std::pair<VarId, LinearTerm>> solved;  // x = term, in elimination order
  for (;;) {
    std::size_t pick = atoms.size();
    VarId x = 0;
    int sign = 1;
    for (std::size_t i = 0; i < atoms.size() && pick == atoms.size(); ++i) {
      if (atoms[i].rel() != Rel::Eq) continue;
      for (const auto& [v, c] : atoms[i].term().entries())
        if (mpz_cmp_ui(c.get_den_mpz_t(), 1) == 0 && mpz_cmpabs_ui(c.get_num_mpz_t(), 1) == 0) {
          pick = i;
          x = v;
          sign = sgn(c);
          break;
        }
    }
    if (pick == atoms.size()) break;
    // c*x + rest = 0 with c = ±1  =>  x = -c*rest
    LinearTerm rest = atoms[pick].term() - LinearTerm::variable(x, Rational(sign));
    if (sign > 0) rest = -rest;
    atoms.erase(atoms.begin() + static_cast<std::ptrdiff_t>(pick));
    std::vector<Atom> next;
    next.reserve(atoms.size());
    for (const auto& a : atoms) {
      const auto& es = a.term().entries();
      const bool has_x = std::any_of(es.begin(), es.end(), [x](const auto& e) { return e.first == x; });
      Atom b = has_x ? a.substitute(x, rest) : a;
      if (auto k = b.constant_value()) {
        if (!*k) return {};
        continue;
      }
      next.push_back(std::move(b));
    }
    atoms = std::move(next);
    solved.emplace_back(x, std::move(rest));
  }
  for (const auto& a : atoms)
    if (auto k = a.constant_value(); k && !*k) return {};
  ConjunctionResult r;
  // only single-variable bounds left: compare them directly
  const bool bounds_only = std::all_of(atoms.begin(), atoms.end(), [](const Atom& a) {
    return a.term().entries().size() == 1 && a.rel() == Rel::Le;
  });
  if (bounds_only && !atoms.empty()) {
    std::map<VarId, std::pair<std::optional<Rational>, std::optional<Rational>>> bounds;
    for (const auto& a : atoms) {
      const auto& [v, c] = a.term().entries().front();
      const Rational k = -a.term().constant() / c;  // c*v + const <= 0
      auto& [lo, hi] = bounds[v];
      if (c > 0) {
        if (!hi || k < *hi) hi = k;
      } else if (!lo || k > *lo) {
        lo = k;
      }
    }
    r.sat = true;
    for (const auto& [v, b] : bounds) {
      if (b.first && b.second && *b.first > *b.second) return {};
      r.model[v] = b.first ? *b.first : b.second ? *b.second : Rational(0);
    }
  } else if (!atoms.empty()) {
    r = solve_conjunction(atoms);
    if (!r.sat) return ConjunctionResult{};
  } else {
    r.sat = true;
  }
  for (auto it = solved.rbegin(); it != solved.rend(); ++it) {
    const Rational v = it->second.evaluate([&](VarId y) -> Rational {
      auto f = r.model.find(y);
      return f == r.model.end() ? Rational(0) : f->second;
    });
    r.model[it->first] = v;
  }
  return r;
}

bool verify_certificate(std::span<const Atom> atoms, const FarkasCertificate& cert) {
  LinearTerm sum;
  bool strict = false;
  for (const auto& [idx, mu] : cert.multipliers) {
    if (idx >= atoms.size()) return false;
    const Atom& a = atoms[idx];
    if (a.rel() != Rel::Eq && mu < 0) return false;
    if (a.rel() == Rel::Lt && mu > 0) strict = true;
    sum += a.term() * mu;
  }
  if (!sum.is_constant()) return false;
  return sum.constant() > 0 || (sum.constant() == 0 && strict);
}

}  // namespace esst::logic
