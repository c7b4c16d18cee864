#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <unordered_map>

#include "hull_lab/hull.hpp"

namespace hull_lab {

/// Finitely supported vector in l^2(S), indexed by normal forms.
using Vec = std::unordered_map<Word, double, WordHash>;

inline double norm2(const Vec& v) {
  double s = 0;
  for (const auto& [w, x] : v) s += x * x;
  return std::sqrt(s);
}

inline void axpy(Vec& y, double a, const Vec& x) {
  for (const auto& [w, v] : x) {
    double& t = y[w];
    t += a * v;
  }
}

inline Vec drop_zeros(Vec v) {
  for (auto it = v.begin(); it != v.end();) it = it->second == 0.0 ? v.erase(it) : std::next(it);
  return v;
}

// ---------------------------------------------------------------------------
// Operator polynomials

enum class OpKind { scalar, lambda, lambda_star, projection, hull, sum, difference, product, negate };

struct OpNode;
using Op = std::shared_ptr<const OpNode>;

struct OpNode {
  OpKind kind = OpKind::scalar;
  double scalar = 0;
  Word word;
  Ideal ideal;
  HullElement h;
  Op left;
  Op right;
};

namespace op {

inline Op make(OpNode n) { return std::make_shared<OpNode>(std::move(n)); }
inline Op scalar(double c) { return make({OpKind::scalar, c, {}, nullptr, {}, nullptr, nullptr}); }
inline Op lambda(Word s) { return make({OpKind::lambda, 0, std::move(s), nullptr, {}, nullptr, nullptr}); }
inline Op lambda_star(Word s) { return make({OpKind::lambda_star, 0, std::move(s), nullptr, {}, nullptr, nullptr}); }
inline Op projection(Ideal I) { return make({OpKind::projection, 0, {}, std::move(I), {}, nullptr, nullptr}); }
inline Op hull(HullElement h) { return make({OpKind::hull, 0, {}, nullptr, std::move(h), nullptr, nullptr}); }
inline Op binary(OpKind k, Op a, Op b) { return make({k, 0, {}, nullptr, {}, std::move(a), std::move(b)}); }
inline Op sum(Op a, Op b) { return binary(OpKind::sum, std::move(a), std::move(b)); }
inline Op difference(Op a, Op b) { return binary(OpKind::difference, std::move(a), std::move(b)); }
inline Op product(Op a, Op b) { return binary(OpKind::product, std::move(a), std::move(b)); }
inline Op negate(Op a) { return binary(OpKind::negate, std::move(a), nullptr); }

}  // namespace op

/// Zigzag depth: how many letters a product may prepend or strip.
inline std::size_t depth(const Op& e) {
  switch (e->kind) {
    case OpKind::scalar:
    case OpKind::projection: return 0;
    case OpKind::lambda:
    case OpKind::lambda_star: return e->word.size();
    case OpKind::hull: return e->h.body.size();
    case OpKind::negate: return depth(e->left);
    case OpKind::sum:
    case OpKind::difference: return std::max(depth(e->left), depth(e->right));
    case OpKind::product: return depth(e->left) + depth(e->right);
  }
  return 0;
}

/// Exact action of operator polynomials on finitely supported vectors.
class RegularRep {
public:
  explicit RegularRep(const IdealEngine& eng) : eng_(&eng), hc_(eng) {}

  const HullCalculus& hull() const { return hc_; }

  Vec apply(const Op& e, const Vec& v) const {
    const Presentation& p = eng_->presentation();
    Vec out;
    switch (e->kind) {
      case OpKind::scalar:
        if (e->scalar != 0) axpy(out, e->scalar, v);
        break;
      case OpKind::lambda:
        for (const auto& [w, x] : v) out[normalize(p, concat(e->word, w))] += x;
        break;
      case OpKind::lambda_star:
        for (const auto& [w, x] : v)
          if (auto u = eng_->divider().cofactor_normal(e->word, w)) out[*u] += x;
        break;
      case OpKind::projection:
        for (const auto& [w, x] : v)
          if (eng_->contains(e->ideal, w)) out[w] += x;
        break;
      case OpKind::hull:
        for (const auto& [w, x] : v)
          if (auto u = hc_.apply(e->h, w)) out[*u] += x;
        break;
      case OpKind::negate: axpy(out, -1, apply(e->left, v)); break;
      case OpKind::sum:
        out = apply(e->left, v);
        axpy(out, 1, apply(e->right, v));
        break;
      case OpKind::difference:
        out = apply(e->left, v);
        axpy(out, -1, apply(e->right, v));
        break;
      case OpKind::product: out = apply(e->left, apply(e->right, v)); break;
    }
    return drop_zeros(std::move(out));
  }

  Vec apply(const Op& e, const Word& w) const { return apply(e, Vec{{w, 1.0}}); }

  /// Largest ||e delta_w|| over ball words w with |w| <= radius - depth(e).
  double residual(const Op& e, Word* worst = nullptr) const {
    int d = static_cast<int>(depth(e));
    int r = eng_->ball().radius() - d;
    double best = 0;
    if (r < 0) return 0;
    eng_->ball().with_radius(r).walk([&](const Word& w) {
      double n = norm2(apply(e, w));
      if (n > best) {
        best = n;
        if (worst) *worst = w;
      }
      return true;
    });
    return best;
  }

  std::size_t interior_size(const Op& e) const {
    int r = eng_->ball().radius() - static_cast<int>(depth(e));
    return r < 0 ? 0 : eng_->ball().with_radius(r).size();
  }

private:
  const IdealEngine* eng_;
  HullCalculus hc_;
};

/// Grammar: sums and differences of products of factors; a factor is an
/// integer, `L[word]`, `Lstar[word]`, `P[ideal]`, `H[zigzag]`, `-factor` or
/// a parenthesized expression.
inline Op parse_op(const HullCalculus& hc, std::string_view text) {
  const Presentation& p = hc.engine().presentation();
  std::size_t i = 0;
  auto fail = [&](const std::string& what) -> Op {
    throw ParseError(what + " in expression '" + std::string(text) + "'", 1, static_cast<int>(i) + 1);
  };
  auto ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  auto bracket = [&]() -> std::string {
    if (i >= text.size() || text[i] != '[') fail("expected '['");
    std::size_t b = ++i;
    int depth = 1;
    while (i < text.size() && depth > 0) {
      if (text[i] == '[') ++depth;
      if (text[i] == ']') --depth;
      ++i;
    }
    if (depth) fail("unbalanced '['");
    return std::string(text.substr(b, i - b - 1));
  };
  std::function<Op()> expr, term, factor;
  factor = [&]() -> Op {
    ws();
    if (i >= text.size()) return fail("unexpected end");
    char c = text[i];
    if (c == '(') {
      ++i;
      Op e = expr();
      ws();
      if (i >= text.size() || text[i] != ')') return fail("expected ')'");
      ++i;
      return e;
    }
    if (c == '-') {
      ++i;
      return op::negate(factor());
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t b = i;
      while (i < text.size() && (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '.')) ++i;
      return op::scalar(std::stod(std::string(text.substr(b, i - b))));
    }
    std::size_t b = i;
    while (i < text.size() && std::isalpha(static_cast<unsigned char>(text[i]))) ++i;
    std::string name(text.substr(b, i - b));
    try {
      if (name == "L") return op::lambda(normalize(p, p.alphabet.parse_word(bracket())));
      if (name == "Lstar") return op::lambda_star(normalize(p, p.alphabet.parse_word(bracket())));
      if (name == "P") {
        std::string inner = bracket();
        if (inner.size() >= 2 && inner.back() == 'S' && inner.find('(') == std::string::npos)
          return op::projection(ideal::principal(normalize(p, p.alphabet.parse_word(inner.substr(0, inner.size() - 1)))));
        return op::projection(parse_ideal(p, inner));
      }
      if (name == "H") return op::hull(hc.parse(bracket()));
    } catch (const ParseError& e) {
      return fail(e.what());
    }
    return fail("unknown factor '" + name + "'");
  };
  term = [&]() -> Op {
    Op a = factor();
    while (true) {
      ws();
      if (i < text.size() && text[i] == '*') {
        ++i;
        a = op::product(a, factor());
      } else {
        return a;
      }
    }
  };
  expr = [&]() -> Op {
    Op a = term();
    while (true) {
      ws();
      if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
        char c = text[i++];
        Op b = term();
        a = c == '+' ? op::sum(a, b) : op::difference(a, b);
      } else {
        return a;
      }
    }
  };
  ws();
  if (i == text.size()) return op::scalar(0);
  Op e = expr();
  ws();
  if (i != text.size()) fail("trailing input");
  return e;
}

// ---------------------------------------------------------------------------
// Materialized operators on a ball

/// Sparse matrix on the span of the ball. Columns whose image leaves the ball
/// are marked as boundary and excluded from comparisons.
struct BallOperator {
  std::shared_ptr<const std::vector<Word>> basis;
  std::shared_ptr<const std::unordered_map<Word, std::size_t, WordHash>> index;
  std::map<std::pair<std::size_t, std::size_t>, double> entries;  // (row, column)
  std::vector<bool> boundary;
  std::size_t depth = 0;

  std::size_t size() const { return basis->size(); }

  double at(std::size_t r, std::size_t c) const {
    auto it = entries.find({r, c});
    return it == entries.end() ? 0.0 : it->second;
  }

  /// Entries in {0,1}, at most one 1 per row and per column.
  bool partial_permutation() const {
    std::vector<int> rows(size(), 0), cols(size(), 0);
    for (const auto& [rc, v] : entries) {
      if (v != 1.0) return false;
      if (++rows[rc.first] > 1 || ++cols[rc.second] > 1) return false;
    }
    return true;
  }
};

class BallMatrices {
public:
  explicit BallMatrices(const IdealEngine& eng) : eng_(&eng), hc_(eng) {
    auto words = std::make_shared<std::vector<Word>>(eng.ball().words());
    auto idx = std::make_shared<std::unordered_map<Word, std::size_t, WordHash>>();
    for (std::size_t i = 0; i < words->size(); ++i) idx->emplace((*words)[i], i);
    basis_ = std::move(words);
    index_ = std::move(idx);
  }

  const std::vector<Word>& basis() const { return *basis_; }

  BallOperator blank(std::size_t depth) const {
    BallOperator m;
    m.basis = basis_;
    m.index = index_;
    m.boundary.assign(basis_->size(), false);
    m.depth = depth;
    return m;
  }

  BallOperator identity() const {
    BallOperator m = blank(0);
    for (std::size_t i = 0; i < basis_->size(); ++i) m.entries[{i, i}] = 1;
    return m;
  }

  /// Column w holds delta of the image when defined.
  BallOperator from_map(const std::function<std::optional<Word>(const Word&)>& f, std::size_t depth) const {
    BallOperator m = blank(depth);
    for (std::size_t c = 0; c < basis_->size(); ++c) {
      auto img = f((*basis_)[c]);
      if (!img) continue;
      auto it = index_->find(*img);
      if (it == index_->end()) m.boundary[c] = true;
      else m.entries[{it->second, c}] = 1;
    }
    return m;
  }

  BallOperator lambda(const Word& s) const {
    const Presentation& p = eng_->presentation();
    return from_map([&](const Word& w) { return std::optional<Word>(normalize(p, concat(s, w))); }, s.size());
  }

  /// Transpose of lambda(s) on the ball.
  BallOperator lambda_star(const Word& s) const {
    BallOperator l = lambda(s);
    BallOperator m = blank(s.size());
    for (const auto& [rc, v] : l.entries) m.entries[{rc.second, rc.first}] = v;
    return m;
  }

  BallOperator hull(const HullElement& h) const {
    return from_map([&](const Word& w) { return hc_.apply(h, w); }, h.body.size());
  }

  BallOperator indicator(const Ideal& I) const {
    BallOperator m = blank(0);
    for (std::size_t c = 0; c < basis_->size(); ++c)
      if (eng_->contains(I, (*basis_)[c])) m.entries[{c, c}] = 1;
    return m;
  }

  static BallOperator multiply(const BallOperator& a, const BallOperator& b) {
    BallOperator m;
    m.basis = a.basis;
    m.index = a.index;
    m.depth = a.depth + b.depth;
    m.boundary = b.boundary;
    std::map<std::size_t, std::vector<std::pair<std::size_t, double>>> a_cols;
    for (const auto& [rc, v] : a.entries) a_cols[rc.second].push_back({rc.first, v});
    for (const auto& [rc, v] : b.entries) {
      if (a.boundary[rc.first]) m.boundary[rc.second] = true;
      auto it = a_cols.find(rc.first);
      if (it == a_cols.end()) continue;
      for (const auto& [r, av] : it->second) m.entries[{r, rc.second}] += av * v;
    }
    return m;
  }

  static BallOperator combine(const BallOperator& a, const BallOperator& b, double sb) {
    BallOperator m = a;
    m.depth = std::max(a.depth, b.depth);
    for (std::size_t c = 0; c < m.boundary.size(); ++c) m.boundary[c] = a.boundary[c] || b.boundary[c];
    for (const auto& [rc, v] : b.entries) m.entries[rc] += sb * v;
    return m;
  }

  /// Interior columns agree: length <= radius - depth and not boundary in
  /// either operator.
  bool equal_on_interior(const BallOperator& a, const BallOperator& b, std::size_t depth) const {
    int lim = eng_->ball().radius() - static_cast<int>(depth);
    auto columns = [&](const BallOperator& m) {
      std::vector<std::map<std::size_t, double>> cols(basis_->size());
      for (const auto& [rc, v] : m.entries)
        if (v != 0.0) cols[rc.second][rc.first] += v;
      return cols;
    };
    auto ca = columns(a), cb = columns(b);
    for (std::size_t c = 0; c < basis_->size(); ++c) {
      if (static_cast<int>((*basis_)[c].size()) > lim || a.boundary[c] || b.boundary[c]) continue;
      if (ca[c].size() != cb[c].size()) return false;
      for (const auto& [r, v] : ca[c]) {
        auto it = cb[c].find(r);
        if (it == cb[c].end() || std::abs(it->second - v) > 1e-12) return false;
      }
    }
    return true;
  }

private:
  const IdealEngine* eng_;
  HullCalculus hc_;
  std::shared_ptr<const std::vector<Word>> basis_;
  std::shared_ptr<const std::unordered_map<Word, std::size_t, WordHash>> index_;
};

// ---------------------------------------------------------------------------
// Relation checks

struct R4Result {
  bool cover_holds = false;
  std::string note;
  double residual = 0;
};

/// Evaluates prod_i (P_X - P_{X_i}) on the ball after checking that the
/// X_i cover X there.
inline R4Result r4_check(const RegularRep& rep, const IdealEngine& eng, const Ideal& X, const std::vector<Ideal>& covers) {
  R4Result out;
  const Trace& tx = eng.trace(X);
  for (const auto& Y : covers)
    if (!eng.trace(Y).subset_of(tx)) {
      out.note = "cover hypothesis fails: " + eng.describe(Y) + " is not inside " + eng.describe(X);
      return out;
    }
  for (const auto& m : tx.minimal()) {
    bool hit = std::any_of(covers.begin(), covers.end(), [&](const Ideal& Y) { return eng.trace(Y).contains(m); });
    if (!hit) {
      out.note = "cover hypothesis fails: " + eng.presentation().alphabet.format(m) + " is not covered";
      return out;
    }
  }
  out.cover_holds = true;
  if (covers.empty()) return out;
  Op e;
  for (const auto& Y : covers) {
    Op f = op::difference(op::projection(X), op::projection(Y));
    e = e ? op::product(e, f) : f;
  }
  out.residual = rep.residual(e);
  out.note = "cover holds on " + eng.ball().describe();
  return out;
}

struct EpsResult {
  double eps = 0;
  double sup = 0;
  int m = 0;
};

/// The largest admissible eps is sup = (1 - 1/sqrt(m alpha)) / m; returns
/// half of it. `m` empty means infinite, where m' is the least integer with
/// 1/m' < alpha.
inline EpsResult lemma16_eps(std::optional<int> m, double alpha) {
  int mm = 0;
  if (m) {
    if (*m < 1) throw PreconditionError("m must be positive");
    if (!(alpha > 1.0 / *m)) throw PreconditionError("alpha must exceed 1/m");
    mm = *m;
  } else {
    if (!(alpha > 0)) throw PreconditionError("alpha must be positive");
    mm = static_cast<int>(std::floor(1.0 / alpha)) + 1;
  }
  double sup = (1.0 - 1.0 / std::sqrt(mm * alpha)) / mm;
  return EpsResult{sup / 2, sup, mm};
}

/// Normalized trace of |(1/m) sum_{k=1..m} u^k|^2 for the cyclic shift u.
inline double lemma16_b_trace(int m) {
  if (m < 2) throw PreconditionError("m must be at least 2");
  using Mat = std::vector<std::vector<double>>;
  auto mul = [m](const Mat& x, const Mat& y) {
    Mat z(m, std::vector<double>(m, 0.0));
    for (int i = 0; i < m; ++i)
      for (int k = 0; k < m; ++k)
        for (int j = 0; j < m; ++j) z[i][j] += x[i][k] * y[k][j];
    return z;
  };
  Mat u(m, std::vector<double>(m, 0.0));
  for (int i = 0; i < m; ++i) u[(i + 1) % m][i] = 1.0;
  Mat a(m, std::vector<double>(m, 0.0));
  Mat pw = u;
  for (int k = 1; k <= m; ++k) {
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) a[i][j] += pw[i][j] / m;
    pw = mul(pw, u);
  }
  Mat at(m, std::vector<double>(m, 0.0));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) at[i][j] = a[j][i];
  Mat b = mul(at, a);
  double tr = 0;
  for (int i = 0; i < m; ++i) tr += b[i][i];
  return tr / m;
}

}  // namespace hull_lab
