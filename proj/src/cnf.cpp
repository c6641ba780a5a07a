#include "sirup/cnf.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sirup {

int CNF::var(const std::string& atom) {
    auto it = ids_.find(atom);
    if (it != ids_.end()) return it->second;
    atoms_.push_back(atom);
    int id = static_cast<int>(atoms_.size());
    ids_.emplace(atom, id);
    return id;
}

int CNF::find_var(const std::string& atom) const {
    auto it = ids_.find(atom);
    return it == ids_.end() ? 0 : it->second;
}

void CNF::add_clause(std::vector<int> lits) {
    std::sort(lits.begin(), lits.end());
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    clauses_.push_back(std::move(lits));
}

std::string CNF::to_dimacs() const {
    std::ostringstream out;
    for (size_t i = 0; i < atoms_.size(); ++i)
        out << "c var " << (i + 1) << " = " << atoms_[i] << "\n";
    out << "p cnf " << atoms_.size() << " " << clauses_.size() << "\n";
    for (const auto& cl : clauses_) {
        for (int lit : cl) out << lit << " ";
        out << "0\n";
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// DPLL

namespace {

struct Solver {
    int n_vars;
    const std::vector<std::vector<int>>& clauses;
    std::vector<char> value;  // 0 false, 1 true, 2 unset

    explicit Solver(const CNF& cnf)
        : n_vars(cnf.var_count()), clauses(cnf.clauses()),
          value(static_cast<size_t>(n_vars) + 1, 2) {}

    bool lit_true(int lit) const {
        char v = value[std::abs(lit)];
        return v != 2 && (v == 1) == (lit > 0);
    }
    bool lit_false(int lit) const {
        char v = value[std::abs(lit)];
        return v != 2 && (v == 1) != (lit > 0);
    }

    // Unit propagation over the full clause list; small formulas only, so
    // no watched literals. Returns false on conflict; records assigned
    // variables in trail.
    bool propagate(std::vector<int>& trail) {
        bool changed = true;
        while (changed) {
            changed = false;
            for (const auto& cl : clauses) {
                int unassigned = 0, last = 0;
                bool sat = false;
                for (int lit : cl) {
                    if (lit_true(lit)) {
                        sat = true;
                        break;
                    }
                    if (!lit_false(lit)) {
                        ++unassigned;
                        last = lit;
                    }
                }
                if (sat) continue;
                if (unassigned == 0) return false;
                if (unassigned == 1) {
                    value[std::abs(last)] = last > 0 ? 1 : 0;
                    trail.push_back(std::abs(last));
                    changed = true;
                }
            }
        }
        return true;
    }

    // Assign every variable occurring with only one polarity among the
    // not-yet-satisfied clauses.
    void pure_literals(std::vector<int>& trail) {
        std::vector<uint8_t> polarity(static_cast<size_t>(n_vars) + 1, 0);
        for (const auto& cl : clauses) {
            bool sat = false;
            for (int lit : cl)
                if (lit_true(lit)) {
                    sat = true;
                    break;
                }
            if (sat) continue;
            for (int lit : cl) {
                if (lit_false(lit)) continue;
                polarity[std::abs(lit)] |= lit > 0 ? 1 : 2;
            }
        }
        for (int v = 1; v <= n_vars; ++v) {
            if (value[v] != 2) continue;
            if (polarity[v] == 1 || polarity[v] == 2) {
                value[v] = polarity[v] == 1 ? 1 : 0;
                trail.push_back(v);
            }
        }
    }

    int pick_branch_var() const {
        std::vector<int> count(static_cast<size_t>(n_vars) + 1, 0);
        for (const auto& cl : clauses) {
            bool sat = false;
            for (int lit : cl)
                if (lit_true(lit)) {
                    sat = true;
                    break;
                }
            if (sat) continue;
            for (int lit : cl)
                if (!lit_false(lit)) ++count[std::abs(lit)];
        }
        int best = 0, best_count = 0;
        for (int v = 1; v <= n_vars; ++v)
            if (value[v] == 2 && count[v] > best_count) {
                best = v;
                best_count = count[v];
            }
        return best;  // 0 when everything relevant is assigned
    }

    bool all_satisfied() const {
        for (const auto& cl : clauses) {
            bool sat = false;
            for (int lit : cl)
                if (lit_true(lit)) {
                    sat = true;
                    break;
                }
            if (!sat) return false;
        }
        return true;
    }

    bool solve() {
        std::vector<int> trail;
        if (!propagate(trail)) {
            undo(trail);
            return false;
        }
        pure_literals(trail);
        if (!propagate(trail)) {
            undo(trail);
            return false;
        }
        int v = pick_branch_var();
        if (v == 0) {
            if (all_satisfied()) return true;
            undo(trail);
            return false;
        }
        for (char first : {char(1), char(0)}) {
            value[v] = first;
            if (solve()) return true;
            value[v] = 2;
        }
        undo(trail);
        return false;
    }

    void undo(const std::vector<int>& trail) {
        for (int v : trail) value[v] = 2;
    }
};

}  // namespace

std::optional<std::vector<char>> dpll_solve(const CNF& cnf) {
    Solver solver(cnf);
    if (!solver.solve()) return std::nullopt;
    std::vector<char> assignment(static_cast<size_t>(cnf.var_count()) + 1, 0);
    for (int v = 1; v <= cnf.var_count(); ++v)
        assignment[v] = solver.value[v] == 1 ? 1 : 0;
    return assignment;
}

}  // namespace sirup
