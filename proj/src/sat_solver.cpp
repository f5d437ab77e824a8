#include "frv/sat_solver.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "frv/error.hpp"

namespace frv {

namespace {

using Lit = std::uint32_t;  // 2 * var + sign, var 0-based
constexpr Lit kNoLit = ~Lit{0};
constexpr int kNoReason = -1;

Lit from_dimacs(int d) { return static_cast<Lit>((std::abs(d) - 1) * 2 + (d < 0 ? 1 : 0)); }
std::uint32_t var_of(Lit l) { return l >> 1; }

// 1, 1, 2, 1, 1, 2, 4, ...
double luby(double y, int x) {
  int size = 1, seq = 0;
  while (size < x + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != x) {
    size = (size - 1) >> 1;
    --seq;
    x = x % size;
  }
  double r = 1;
  for (int i = 0; i < seq; ++i) r *= y;
  return r;
}

class Cdcl {
 public:
  explicit Cdcl(const Cnf& cnf)
      : nvars_(cnf.num_vars),
        assign_(nvars_, -1),
        level_(nvars_, 0),
        reason_(nvars_, kNoReason),
        phase_(nvars_, 0),
        seen_(nvars_, 0),
        activity_(nvars_, 0.0),
        watches_(2 * static_cast<size_t>(nvars_)) {
    for (const auto& c : cnf.clauses) {
      std::vector<Lit> lits;
      for (int d : c) lits.push_back(from_dimacs(d));
      if (!add_input(std::move(lits))) {
        ok_ = false;
        return;
      }
    }
  }

  SatStatus solve(std::uint64_t conflict_limit, SolverStats& st) {
    if (!ok_) return SatStatus::Unsat;
    int restart_no = 0;
    std::uint64_t restart_budget = static_cast<std::uint64_t>(luby(2, restart_no) * 64);
    std::uint64_t since_restart = 0;
    std::vector<Lit> learnt;
    for (;;) {
      int confl = propagate(st);
      if (confl != kNoReason) {
        ++st.conflicts;
        ++since_restart;
        if (decision_level() == 0) return SatStatus::Unsat;
        int bt = 0;
        analyze(confl, learnt, bt);
        backtrack(bt);
        if (learnt.size() == 1) {
          enqueue(learnt[0], kNoReason);
        } else {
          int ci = static_cast<int>(clauses_.size());
          clauses_.push_back(learnt);
          watches_[learnt[0]].push_back(ci);
          watches_[learnt[1]].push_back(ci);
          enqueue(learnt[0], ci);
        }
        var_inc_ /= 0.95;
        if (conflict_limit && st.conflicts >= conflict_limit) return SatStatus::Unknown;
        continue;
      }
      if (since_restart >= restart_budget) {
        ++st.restarts;
        backtrack(0);
        since_restart = 0;
        restart_budget = static_cast<std::uint64_t>(luby(2, ++restart_no) * 64);
      }
      Lit d = pick();
      if (d == kNoLit) return SatStatus::Sat;
      ++st.decisions;
      trail_lim_.push_back(trail_.size());
      enqueue(d, kNoReason);
    }
  }

  std::vector<bool> model() const {
    std::vector<bool> m(nvars_ + 1, false);
    for (int v = 0; v < nvars_; ++v) m[v + 1] = assign_[v] == 1;
    return m;
  }

 private:
  // 1 true, 0 false, -1 unassigned.
  int value(Lit l) const {
    int v = assign_[var_of(l)];
    return v < 0 ? -1 : (v ^ static_cast<int>(l & 1));
  }
  int decision_level() const { return static_cast<int>(trail_lim_.size()); }

  bool add_input(std::vector<Lit> lits) {
    std::sort(lits.begin(), lits.end());
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    for (size_t i = 1; i < lits.size(); ++i) {
      if ((lits[i] ^ 1) == lits[i - 1]) return true;  // tautology
    }
    if (lits.empty()) return false;
    if (lits.size() == 1) {
      int v = value(lits[0]);
      if (v == 0) return false;
      if (v < 0) enqueue(lits[0], kNoReason);
      return true;
    }
    int ci = static_cast<int>(clauses_.size());
    watches_[lits[0]].push_back(ci);
    watches_[lits[1]].push_back(ci);
    clauses_.push_back(std::move(lits));
    return true;
  }

  void enqueue(Lit l, int reason) {
    std::uint32_t v = var_of(l);
    assign_[v] = static_cast<std::int8_t>((l & 1) ? 0 : 1);
    level_[v] = decision_level();
    reason_[v] = reason;
    trail_.push_back(l);
  }

  int propagate(SolverStats& st) {
    while (qhead_ < trail_.size()) {
      Lit fl = trail_[qhead_++] ^ 1;  // literal that just became false
      ++st.propagations;
      auto& ws = watches_[fl];
      size_t i = 0, j = 0;
      while (i < ws.size()) {
        int ci = ws[i++];
        auto& c = clauses_[ci];
        if (c[0] == fl) std::swap(c[0], c[1]);
        if (value(c[0]) == 1) {
          ws[j++] = ci;
          continue;
        }
        bool moved = false;
        for (size_t k = 2; k < c.size(); ++k) {
          if (value(c[k]) != 0) {
            std::swap(c[1], c[k]);
            watches_[c[1]].push_back(ci);
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[j++] = ci;
        if (value(c[0]) == 0) {
          while (i < ws.size()) ws[j++] = ws[i++];
          ws.resize(j);
          qhead_ = trail_.size();
          return ci;
        }
        enqueue(c[0], ci);
      }
      ws.resize(j);
    }
    return kNoReason;
  }

  void bump(std::uint32_t v) {
    if ((activity_[v] += var_inc_) > 1e100) {
      for (double& a : activity_) a *= 1e-100;
      var_inc_ *= 1e-100;
    }
  }

  void analyze(int confl, std::vector<Lit>& learnt, int& bt_level) {
    learnt.assign(1, kNoLit);
    int pending = 0;
    Lit p = kNoLit;
    size_t idx = trail_.size();
    int ci = confl;
    do {
      const auto& c = clauses_[ci];
      for (size_t k = (p == kNoLit ? 0 : 1); k < c.size(); ++k) {
        std::uint32_t v = var_of(c[k]);
        if (seen_[v] || level_[v] == 0) continue;
        seen_[v] = 1;
        bump(v);
        if (level_[v] >= decision_level()) ++pending;
        else learnt.push_back(c[k]);
      }
      while (!seen_[var_of(trail_[--idx])]) {
      }
      p = trail_[idx];
      ci = reason_[var_of(p)];
      seen_[var_of(p)] = 0;
      --pending;
    } while (pending > 0);
    learnt[0] = p ^ 1;

    bt_level = 0;
    size_t max_i = 1;
    for (size_t i = 1; i < learnt.size(); ++i) {
      seen_[var_of(learnt[i])] = 0;
      if (level_[var_of(learnt[i])] > bt_level) {
        bt_level = level_[var_of(learnt[i])];
        max_i = i;
      }
    }
    if (learnt.size() > 1) std::swap(learnt[1], learnt[max_i]);
  }

  void backtrack(int level) {
    if (decision_level() <= level) return;
    for (size_t i = trail_.size(); i > trail_lim_[level]; --i) {
      std::uint32_t v = var_of(trail_[i - 1]);
      phase_[v] = static_cast<std::int8_t>(assign_[v]);
      assign_[v] = -1;
      reason_[v] = kNoReason;
    }
    trail_.resize(trail_lim_[level]);
    trail_lim_.resize(level);
    qhead_ = trail_.size();
  }

  Lit pick() const {
    int best = -1;
    for (int v = 0; v < nvars_; ++v) {
      if (assign_[v] < 0 && (best < 0 || activity_[v] > activity_[best])) best = v;
    }
    if (best < 0) return kNoLit;
    return static_cast<Lit>(best * 2 + (phase_[best] == 1 ? 0 : 1));
  }

  int nvars_;
  bool ok_ = true;
  std::vector<std::int8_t> assign_;
  std::vector<int> level_;
  std::vector<int> reason_;
  std::vector<std::int8_t> phase_;
  std::vector<std::uint8_t> seen_;
  std::vector<double> activity_;
  double var_inc_ = 1.0;
  std::vector<std::vector<Lit>> clauses_;
  std::vector<std::vector<int>> watches_;
  std::vector<Lit> trail_;
  std::vector<size_t> trail_lim_;
  size_t qhead_ = 0;
};

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += "'\\''";
    else out += c;
  }
  return out + "'";
}

}  // namespace

SatResult solve_builtin(const Cnf& cnf, std::uint64_t conflict_limit, SolverStats* stats) {
  SolverStats local;
  Cdcl solver(cnf);
  SatResult r;
  r.status = solver.solve(conflict_limit, stats ? *stats : local);
  if (r.status == SatStatus::Sat) r.model = solver.model();
  if (r.status == SatStatus::Unknown) r.reason = "conflict limit reached";
  return r;
}

std::vector<bool> parse_model_lines(const std::string& text, int num_vars) {
  std::vector<bool> model(num_vars + 1, false);
  std::istringstream in(text);
  std::string line;
  bool any = false;
  while (std::getline(in, line)) {
    if (line.size() < 1 || line[0] != 'v') continue;
    any = true;
    std::istringstream ls(line.substr(1));
    std::string tok;
    while (ls >> tok) {
      long lit = 0;
      try {
        size_t used = 0;
        lit = std::stol(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw Error(ErrorCode::ModelParseError, "bad literal '" + tok + "' in solver model");
      }
      if (lit == 0) continue;
      if (std::abs(lit) > num_vars) {
        throw Error(ErrorCode::ModelParseError, "model literal " + tok + " exceeds variable count");
      }
      model[std::abs(lit)] = lit > 0;
    }
  }
  if (!any) throw Error(ErrorCode::ModelParseError, "solver reported SAT without 'v' lines");
  return model;
}

SatResult solve_external(const Cnf& cnf, const std::vector<std::string>& command) {
  if (command.empty()) throw Error(ErrorCode::BackendSpawnFailure, "empty solver command");
  char path[] = "/tmp/frv-XXXXXX.cnf";
  int fd = mkstemps(path, 4);
  if (fd < 0) throw Error(ErrorCode::BackendSpawnFailure, "cannot create temporary DIMACS file");
  close(fd);
  {
    std::ofstream out(path);
    out << emit_dimacs(cnf);
  }

  std::string cmd;
  for (const auto& a : command) cmd += shell_quote(a) + " ";
  cmd += shell_quote(path) + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) {
    std::remove(path);
    throw Error(ErrorCode::BackendSpawnFailure, "cannot start '" + command.front() + "'");
  }
  std::string output;
  std::array<char, 4096> buf;
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) output.append(buf.data(), n);
  int status = pclose(pipe);
  std::remove(path);

  if (status == -1 || !WIFEXITED(status)) {
    throw Error(ErrorCode::BackendSpawnFailure, "solver '" + command.front() + "' did not exit normally");
  }
  int code = WEXITSTATUS(status);
  if (code == 127 || code == 126) {
    throw Error(ErrorCode::BackendSpawnFailure, "cannot execute '" + command.front() + "'");
  }
  SatResult r;
  if (code == 10) {
    r.status = SatStatus::Sat;
    r.model = parse_model_lines(output, cnf.num_vars);
  } else if (code == 20) {
    r.status = SatStatus::Unsat;
  } else {
    r.status = SatStatus::Unknown;
    r.reason = "solver exited with code " + std::to_string(code);
  }
  return r;
}

SatResult solve_cnf(const Cnf& cnf, const SolverBackend& backend) {
  if (backend.builtin()) return solve_builtin(cnf);
  return solve_external(cnf, backend.command);
}

bool satisfies(const Cnf& cnf, const std::vector<bool>& model) {
  if (model.size() < static_cast<size_t>(cnf.num_vars) + 1) return false;
  for (const auto& c : cnf.clauses) {
    bool sat = std::any_of(c.begin(), c.end(), [&](int l) { return model[std::abs(l)] == (l > 0); });
    if (!sat) return false;
  }
  return true;
}

}  // namespace frv
