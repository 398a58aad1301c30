#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <exception>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <tuple>
#include <type_traits>
#include <vector>

#include "conley/block_map.hpp"
#include "conley/instance.hpp"
#include "conley/les.hpp"
#include "conley/symmetry.hpp"

namespace conley {

/// One scalar entry of a strictly sub-diagonal block: row `row`, column
/// `col` of the map C_degree(q) -> C_{degree-1}(p).
struct Unknown {
  std::size_t q = 0, p = 0;
  int degree = 0;
  std::size_t row = 0, col = 0;

  friend bool operator==(const Unknown&, const Unknown&) = default;
};

/// Strictly sub-diagonal block pairs (q > p), ordered by the height of q,
/// then q, then p.
inline std::vector<std::pair<std::size_t, std::size_t>> block_pairs(const Poset& poset) {
  auto pairs = poset.relations();
  std::stable_sort(pairs.begin(), pairs.end(), [&](const auto& a, const auto& b) {
    return std::tuple(poset.height(a.first), a.first, a.second) <
           std::tuple(poset.height(b.first), b.first, b.second);
  });
  return pairs;
}

/// Every free scalar of the search, in canonical order: by block pair (see
/// block_pairs), then degree, row and column.
template <class R>
std::vector<Unknown> unknown_blocks(const Instance<R>& inst) {
  const auto base = inst.base_map();
  const auto [lo, hi] = base.degree_window();
  std::vector<Unknown> out;
  for (auto [q, p] : block_pairs(inst.poset()))
    for (int n = lo; n <= hi; ++n)
      for (std::size_t r = 0; r < base.rows_of(q, n); ++r)
        for (std::size_t c = 0; c < base.cols_of(p, n); ++c)
          out.push_back({q, p, n, r, c});
  return out;
}

struct SearchStats {
  std::uint64_t explored = 0; // partial assignments visited
  std::uint64_t pruned = 0;   // partial assignments rejected by a constraint
  double elapsed_ms = 0;
};

struct SearchOptions {
  std::size_t jobs = 1;
  bool symmetric = false;
};

template <class R>
struct Solution {
  BlockMap<R> delta;
  std::vector<typename R::value_type> assignment; // in unknown_blocks order
};

template <class R>
struct SolutionSet {
  std::vector<Solution<R>> solutions;
  SearchStats stats;

  std::size_t size() const { return solutions.size(); }
};

namespace detail {

template <class R>
class SearchModel {
public:
  using T = typename R::value_type;

  struct Slot {
    std::size_t q, p;
    int n;
  };
  struct Term {
    std::size_t param, row, col;
    T coef;
  };
  struct Constraint {
    enum class Kind { symmetric_diagonal, boundary, homology } kind;
    std::size_t q = 0, p = 0;
    int n = 0;
    Interval interval;
    const GradedModule* expected = nullptr;
  };

  SearchModel(const Instance<R>& inst, bool symmetric) : inst_(&inst) {
    if (symmetric)
      build_symmetric_params();
    else
      build_plain_params();
    build_constraints(symmetric);
  }

  const Instance<R>& instance() const { return *inst_; }
  std::size_t params() const { return param_slots_.size(); }
  const std::vector<Slot>& slots() const { return slots_; }
  const std::vector<Term>& terms(std::size_t slot) const { return slot_terms_[slot]; }
  const std::vector<std::size_t>& param_slots(std::size_t k) const { return param_slots_[k]; }
  const std::vector<std::size_t>& scheduled(std::size_t k) const { return schedule_[k]; }
  const std::vector<std::size_t>& root() const { return root_; }

  bool holds(const BlockMap<R>& work, std::size_t c) const {
    const auto& con = constraints_[c];
    switch (con.kind) {
    case Constraint::Kind::symmetric_diagonal:
      return is_symmetric(work, *inst_->symmetry());
    case Constraint::Kind::boundary:
      return is_zero(work.ring(), square_block(work, con.q, con.p, con.n));
    case Constraint::Kind::homology:
      try {
        return iso_check(homology(work, con.interval), *con.expected);
      } catch (const NotAComplex&) {
        return false;
      }
    }
    return false;
  }

private:
  std::size_t slot_id(std::size_t q, std::size_t p, int n) {
    const auto key = std::tuple(q, p, n);
    auto it = slot_index_.find(key);
    if (it != slot_index_.end()) return it->second;
    slots_.push_back({q, p, n});
    slot_terms_.emplace_back();
    slot_index_.emplace(key, slots_.size() - 1);
    return slots_.size() - 1;
  }

  std::size_t new_param() {
    param_slots_.emplace_back();
    return param_slots_.size() - 1;
  }

  void add_term(std::size_t param, std::size_t slot, std::size_t row, std::size_t col,
                const T& coef) {
    slot_terms_[slot].push_back({param, row, col, coef});
    auto& ps = param_slots_[param];
    if (std::find(ps.begin(), ps.end(), slot) == ps.end()) ps.push_back(slot);
  }

  void build_plain_params() {
    const auto& ring = inst_->ring();
    for (const auto& u : unknown_blocks(*inst_))
      add_term(new_param(), slot_id(u.q, u.p, u.degree), u.row, u.col, ring.one());
  }

  // One parameter per basis vector of the stabilizer-fixed space of each
  // orbit representative; the other blocks of the orbit are transported.
  void build_symmetric_params() {
    if constexpr (R::is_field) {
      const auto& ring = inst_->ring();
      if (!inst_->symmetry()) throw InvalidAction("instance has no symmetry");
      const auto& act = *inst_->symmetry();
      const auto base = inst_->base_map();
      const auto [lo, hi] = base.degree_window();
      std::map<std::tuple<std::size_t, std::size_t, int>, bool> seen;
      for (auto [q, p] : block_pairs(inst_->poset()))
        for (int n = lo; n <= hi; ++n) {
          const std::size_t rows = base.rows_of(q, n), cols = base.cols_of(p, n);
          if (rows == 0 || cols == 0 || seen.count({q, p, n})) continue;
          std::vector<std::pair<std::tuple<std::size_t, std::size_t>, std::size_t>> orbit;
          std::vector<std::size_t> stabilizer;
          for (std::size_t g = 0; g < act.order(); ++g) {
            const auto& perm = act.elements()[g].perm;
            const auto image = std::tuple(perm[q], perm[p]);
            if (perm[q] == q && perm[p] == p) stabilizer.push_back(g);
            if (seen.count({perm[q], perm[p], n})) continue;
            seen[{perm[q], perm[p], n}] = true;
            orbit.emplace_back(image, g);
          }
          // fixed space {X : X psi_p(s) = psi_q(s) X for s in the stabilizer}
          const std::size_t cells = rows * cols;
          MatrixOver<R> lin(cells, cells * stabilizer.size(), ring.zero());
          for (std::size_t e = 0; e < cells; ++e) {
            auto unit = zero_matrix(ring, rows, cols);
            unit(e / cols, e % cols) = ring.one();
            for (std::size_t k = 0; k < stabilizer.size(); ++k) {
              const auto s = stabilizer[k];
              const auto diff = add(ring, multiply(ring, unit, act.psi(s, p, n - 1)),
                                    negate(ring, multiply(ring, act.psi(s, q, n), unit)));
              for (std::size_t i = 0; i < cells; ++i)
                lin(e, k * cells + i) = diff(i / cols, i % cols);
            }
          }
          const auto fixed = kernel_basis(ring, lin);
          for (std::size_t b = 0; b < fixed.rows(); ++b) {
            const auto param = new_param();
            auto x = zero_matrix(ring, rows, cols);
            for (std::size_t i = 0; i < cells; ++i) x(i / cols, i % cols) = fixed(b, i);
            for (const auto& [image, g] : orbit) {
              const auto inv = inverse(ring, act.psi(g, q, n));
              const auto moved = multiply(ring, multiply(ring, *inv, x), act.psi(g, p, n - 1));
              const auto slot = slot_id(std::get<0>(image), std::get<1>(image), n);
              for (std::size_t r = 0; r < moved.rows(); ++r)
                for (std::size_t c = 0; c < moved.cols(); ++c)
                  if (!ring.is_zero(moved(r, c))) add_term(param, slot, r, c, moved(r, c));
            }
          }
        }
    } else {
      throw UnsupportedRing("symmetric enumeration needs a finite field");
    }
  }

  std::vector<std::size_t> params_of(const std::vector<std::size_t>& slots) const {
    std::vector<std::size_t> out;
    for (auto s : slots)
      for (const auto& t : slot_terms_[s]) out.push_back(t.param);
    return out;
  }

  std::vector<std::size_t> existing_slots(
      const std::vector<std::tuple<std::size_t, std::size_t, int>>& keys) const {
    std::vector<std::size_t> out;
    for (const auto& k : keys) {
      auto it = slot_index_.find(k);
      if (it != slot_index_.end()) out.push_back(it->second);
    }
    return out;
  }

  void schedule(std::size_t c, const std::vector<std::size_t>& deps) {
    if (deps.empty())
      root_.push_back(c);
    else
      schedule_[*std::max_element(deps.begin(), deps.end())].push_back(c);
  }

  void build_constraints(bool symmetric) {
    schedule_.assign(params(), {});
    const auto& inst = *inst_;
    const auto& poset = inst.poset();
    const auto base = inst.base_map();
    const auto [lo, hi] = base.degree_window();
    using Kind = typename Constraint::Kind;

    if (symmetric) {
      constraints_.push_back({Kind::symmetric_diagonal});
      root_.push_back(constraints_.size() - 1);
    }
    auto has_diagonal = [&](std::size_t p, int n) {
      const auto* d = base.find(p, p, n);
      return d && !is_zero(inst.ring(), *d);
    };
    for (auto [q, p] : block_pairs(poset))
      for (int n = lo; n <= hi; ++n) {
        if (base.rows_of(q, n) == 0 || inst.summands()[p].rank(n - 2) == 0) continue;
        std::vector<std::tuple<std::size_t, std::size_t, int>> keys;
        for (std::size_t r = 0; r < poset.size(); ++r)
          if (poset.greater(q, r) && poset.greater(r, p)) {
            keys.emplace_back(q, r, n);
            keys.emplace_back(r, p, n - 1);
          }
        if (has_diagonal(q, n)) keys.emplace_back(q, p, n - 1);
        if (has_diagonal(p, n - 1)) keys.emplace_back(q, p, n);
        constraints_.push_back({Kind::boundary, q, p, n});
        schedule(constraints_.size() - 1, params_of(existing_slots(keys)));
      }
    for (const auto& [iv, g] : inst.index_data()) {
      std::vector<std::tuple<std::size_t, std::size_t, int>> keys;
      for (auto q : iv.members())
        for (auto p : iv.members())
          if (poset.greater(q, p))
            for (int n = lo; n <= hi; ++n) keys.emplace_back(q, p, n);
      Constraint c{Kind::homology};
      c.interval = iv;
      c.expected = &g;
      constraints_.push_back(c);
      schedule(constraints_.size() - 1, params_of(existing_slots(keys)));
    }
  }

  const Instance<R>* inst_;
  std::vector<Slot> slots_;
  std::map<std::tuple<std::size_t, std::size_t, int>, std::size_t> slot_index_;
  std::vector<std::vector<Term>> slot_terms_;
  std::vector<std::vector<std::size_t>> param_slots_;
  std::vector<Constraint> constraints_;
  std::vector<std::vector<std::size_t>> schedule_;
  std::vector<std::size_t> root_;
};

/// Depth-first assignment of the model's parameters over a finite field.
template <class R>
class Engine {
public:
  using T = typename R::value_type;
  using Visitor = std::function<void(const Engine&)>;

  explicit Engine(const SearchModel<R>& model)
      : model_(&model), work_(model.instance().base_map()),
        values_(model.params(), model.instance().ring().zero()),
        field_values_(model.instance().ring().elements()) {}

  const BlockMap<R>& work() const { return work_; }
  const SearchStats& stats() const { return stats_; }

  bool root_holds() const {
    for (auto c : model_->root())
      if (!model_->holds(work_, c)) return false;
    return true;
  }

  /// Surviving prefixes of length `depth`, in lexicographic order.
  std::vector<std::vector<T>> prefixes(std::size_t depth) {
    std::vector<std::vector<T>> level{{}};
    for (std::size_t k = 0; k < depth; ++k) {
      std::vector<std::vector<T>> next;
      for (const auto& prefix : level) {
        load(prefix);
        for (const auto& v : field_values_) {
          if (try_assign(k, v)) {
            auto longer = prefix;
            longer.push_back(v);
            next.push_back(std::move(longer));
          }
        }
      }
      level = std::move(next);
    }
    return level;
  }

  void run_from(const std::vector<T>& prefix, const Visitor& visit) {
    load(prefix);
    dfs(prefix.size(), visit);
  }

private:
  void load(const std::vector<T>& prefix) {
    std::fill(values_.begin(), values_.end(), model_->instance().ring().zero());
    std::copy(prefix.begin(), prefix.end(), values_.begin());
    for (std::size_t s = 0; s < model_->slots().size(); ++s) recompute(s);
  }

  void recompute(std::size_t s) {
    const auto& ring = model_->instance().ring();
    const auto& slot = model_->slots()[s];
    auto& m = work_.slot(slot.q, slot.p, slot.n);
    for (std::size_t r = 0; r < m.rows(); ++r)
      for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = ring.zero();
    for (const auto& t : model_->terms(s))
      if (!ring.is_zero(values_[t.param]))
        m(t.row, t.col) = ring.add(m(t.row, t.col), ring.mul(values_[t.param], t.coef));
  }

  bool try_assign(std::size_t k, const T& v) {
    values_[k] = v;
    for (auto s : model_->param_slots(k)) recompute(s);
    ++stats_.explored;
    for (auto c : model_->scheduled(k))
      if (!model_->holds(work_, c)) {
        ++stats_.pruned;
        return false;
      }
    return true;
  }

  void dfs(std::size_t k, const Visitor& visit) {
    if (k == values_.size()) {
      visit(*this);
      return;
    }
    for (const auto& v : field_values_)
      if (try_assign(k, v)) dfs(k + 1, visit);
    values_[k] = model_->instance().ring().zero();
    for (auto s : model_->param_slots(k)) recompute(s);
  }

  const SearchModel<R>* model_;
  BlockMap<R> work_;
  std::vector<T> values_;
  std::vector<T> field_values_;
  SearchStats stats_;
};

template <class R>
std::vector<typename R::value_type> assignment_of(const std::vector<Unknown>& unknowns,
                                                  const BlockMap<R>& delta) {
  std::vector<typename R::value_type> out;
  out.reserve(unknowns.size());
  for (const auto& u : unknowns) {
    const auto* m = delta.find(u.q, u.p, u.degree);
    out.push_back(m ? (*m)(u.row, u.col) : delta.ring().zero());
  }
  return out;
}

/// Runs the search, calling `per_task(task, engine)` for every complete
/// assignment. Tasks are the surviving prefixes in lexicographic order, so
/// concatenating per-task results in task order gives the sequential order.
template <class R, class Collect>
SearchStats run_search(const SearchModel<R>& model, std::size_t jobs, std::size_t& tasks_out,
                       const Collect& collect) {
  SearchStats total;
  Engine<R> master(model);
  if (!master.root_holds()) {
    tasks_out = 0;
    return total;
  }
  const std::size_t q = model.instance().ring().elements().size();
  std::size_t depth = 0;
  for (std::size_t width = 1; jobs > 1 && width < jobs * 4 && depth < model.params(); ++depth)
    width *= q;
  const auto prefixes = master.prefixes(depth);
  total.explored += master.stats().explored;
  total.pruned += master.stats().pruned;
  tasks_out = prefixes.size();

  std::vector<SearchStats> task_stats(prefixes.size());
  auto run_task = [&](std::size_t t) {
    Engine<R> engine(model);
    engine.run_from(prefixes[t], [&](const Engine<R>& e) { collect(t, e.work()); });
    task_stats[t] = engine.stats();
  };
  const std::size_t workers = std::min(std::max<std::size_t>(jobs, 1), prefixes.size());
  if (workers <= 1) {
    for (std::size_t t = 0; t < prefixes.size(); ++t) run_task(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        try {
          for (std::size_t t = next++; t < prefixes.size(); t = next++) run_task(t);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    for (auto& th : pool) th.join();
    for (const auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  for (const auto& s : task_stats) {
    total.explored += s.explored;
    total.pruned += s.pruned;
  }
  return total;
}

template <class R>
void require_finite_field(const Instance<R>& inst) {
  if constexpr (!std::is_same_v<R, PrimeField>)
    throw UnsupportedRing("exhaustive enumeration needs a finite prime field; ring " +
                          inst.ring().spec().name() + " supports verify only");
}

} // namespace detail

/// All connection (or c-connection) matrices over GF(p) compatible with the
/// instance, in lexicographic order of their unknown_blocks assignment.
template <class R>
SolutionSet<R> enumerate(const Instance<R>& inst, SearchOptions opts = {}) {
  detail::require_finite_field(inst);
  const auto start = std::chrono::steady_clock::now();
  SolutionSet<R> out;
  if constexpr (std::is_same_v<R, PrimeField>) {
    const detail::SearchModel<R> model(inst, opts.symmetric);
    const auto unknowns = unknown_blocks(inst);
    std::vector<std::vector<Solution<R>>> per_task;
    std::size_t tasks = 0;
    // tasks are known only after prefix expansion; size lazily under a lock
    std::mutex lock;
    out.stats = detail::run_search(model, opts.jobs, tasks, [&](std::size_t t, const BlockMap<R>& d) {
      Solution<R> s{d, detail::assignment_of(unknowns, d)};
      std::lock_guard guard(lock);
      if (per_task.size() <= t) per_task.resize(t + 1);
      per_task[t].push_back(std::move(s));
    });
    for (auto& chunk : per_task)
      for (auto& s : chunk) out.solutions.push_back(std::move(s));
    std::stable_sort(out.solutions.begin(), out.solutions.end(),
                     [](const auto& a, const auto& b) { return a.assignment < b.assignment; });
  }
  out.stats.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return out;
}

/// Only the Gamma-symmetric solutions, searched over orbit representatives.
template <class R>
SolutionSet<R> enumerate_symmetric(const Instance<R>& inst, SearchOptions opts = {}) {
  if (!inst.symmetry()) throw InvalidAction("instance has no symmetry");
  opts.symmetric = true;
  return enumerate(inst, opts);
}

/// Number of solutions, without storing them.
template <class R>
std::uint64_t count(const Instance<R>& inst, SearchOptions opts = {}, SearchStats* stats = nullptr) {
  detail::require_finite_field(inst);
  if constexpr (std::is_same_v<R, PrimeField>) {
    if (opts.symmetric && !inst.symmetry()) throw InvalidAction("instance has no symmetry");
    const detail::SearchModel<R> model(inst, opts.symmetric);
    std::atomic<std::uint64_t> n{0};
    std::size_t tasks = 0;
    const auto s = detail::run_search(model, opts.jobs, tasks,
                                      [&](std::size_t, const BlockMap<R>&) { ++n; });
    if (stats) *stats = s;
    return n.load();
  }
  return 0;
}

struct CheckResult {
  std::string name;
  enum class Status { pass, fail, skipped } status = Status::pass;
  std::string detail;

  bool passed() const { return status != Status::fail; }
};

struct VerifyReport {
  std::vector<CheckResult> checks;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed(); });
  }
  const CheckResult* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

struct VerifyOptions {
  bool exact_sequences = true;
};

/// Checks Delta against every constraint of the instance, one line each.
template <class R>
VerifyReport verify(const Instance<R>& inst, const BlockMap<R>& delta, VerifyOptions opts = {}) {
  using Status = CheckResult::Status;
  if (!(delta.poset() == inst.poset()) || delta.summands() != inst.summands())
    throw ShapeMismatch("block map does not match the instance's poset and summands");
  const auto& poset = inst.poset();
  const auto& ring = inst.ring();
  VerifyReport rep;
  auto add_check = [&](std::string name, bool ok, std::string detail = {}) {
    rep.checks.push_back({std::move(name), ok ? Status::pass : Status::fail, std::move(detail)});
  };

  const bool triangular = delta.is_lower_triangular(inst.strict());
  add_check("triangular", triangular,
            inst.strict() ? "strictly lower triangular" : "lower triangular");
  if (inst.mode() == Mode::c_connection) {
    std::string where;
    const auto [lo, hi] = delta.degree_window();
    for (std::size_t p = 0; p < poset.size() && where.empty(); ++p)
      for (int n = lo; n <= hi; ++n) {
        auto it = inst.diagonal()[p].find(n);
        const auto want = it != inst.diagonal()[p].end()
                              ? it->second
                              : zero_matrix(ring, delta.rows_of(p, n), delta.cols_of(p, n));
        if (!(delta.block(p, p, n) == want)) {
          where = "block (" + poset.name(p) + "," + poset.name(p) + ") in degree " +
                  std::to_string(n) + " differs from the prescribed differential";
          break;
        }
      }
    add_check("diagonal", where.empty(),
              where.empty() ? "equals the prescribed differentials" : where);
  }
  std::string square_fault;
  {
    const auto [lo, hi] = delta.degree_window();
    for (std::size_t q = 0; q < poset.size() && square_fault.empty(); ++q)
      for (std::size_t p = 0; p < poset.size() && square_fault.empty(); ++p)
        for (int n = lo; n <= hi; ++n)
          if (!is_zero(ring, square_block(delta, q, p, n))) {
            square_fault = "Delta o Delta has a nonzero block (" + poset.name(q) + "," +
                           poset.name(p) + ") from degree " + std::to_string(n);
            break;
          }
  }
  const bool boundary = square_fault.empty();
  add_check("boundary", boundary, boundary ? "Delta o Delta = 0" : square_fault);

  for (const auto& [iv, expected] : inst.index_data()) {
    const std::string name = "homology " + poset.format(iv);
    try {
      const auto got = homology(delta, iv);
      const bool ok = iso_check(got, expected);
      add_check(name, ok, "expected " + expected.to_string() + ", got " + got.to_string());
    } catch (const NotAComplex&) {
      add_check(name, false, "restriction is not a chain complex");
    }
  }
  if (inst.symmetry()) {
    const bool sym = is_symmetric(delta, *inst.symmetry());
    add_check("symmetry", sym,
              sym ? "commutes with the group action" : "does not commute with the group action");
  }

  if (opts.exact_sequences) {
    if (!boundary || !triangular) {
      rep.checks.push_back({"exact sequences", Status::skipped,
                            "requires a lower triangular boundary map"});
    } else {
      LesCache<R> cache(delta);
      for (const auto& pair : poset.adjacent_tuples(2)) {
        if (pair[0].empty() || pair[1].empty()) continue;
        add_check("exact sequence (" + poset.format(pair[0]) + "," + poset.format(pair[1]) + ")",
                  verify_triangle(cache, pair[0], pair[1]));
      }
    }
  }
  return rep;
}

} // namespace conley
