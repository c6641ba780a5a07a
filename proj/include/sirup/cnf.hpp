#ifndef SIRUP_CNF_HPP
#define SIRUP_CNF_HPP

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace sirup {

// Propositional CNF over ground atoms. Variables are 1-based; clauses are
// integer-literal lists. The atom text for each variable is retained so
// DIMACS exports carry a readable variable map.
class CNF {
public:
    int var(const std::string& atom);              // get-or-create
    int find_var(const std::string& atom) const;   // 0 when absent
    void add_clause(std::vector<int> lits);

    int var_count() const { return static_cast<int>(atoms_.size()); }
    size_t clause_count() const { return clauses_.size(); }
    const std::vector<std::vector<int>>& clauses() const { return clauses_; }
    const std::string& atom(int v) const { return atoms_[v - 1]; }

    // `p cnf V C` plus one zero-terminated clause per line; a leading
    // comment block maps each variable to its atom.
    std::string to_dimacs() const;

private:
    std::vector<std::string> atoms_;
    std::unordered_map<std::string, int> ids_;
    std::vector<std::vector<int>> clauses_;
};

// Complete DPLL decision: unit propagation, pure-literal elimination and
// branching on the most frequently occurring variable. Returns a satisfying
// assignment (index = variable, values 0/1; index 0 unused) or nullopt for
// unsatisfiable.
std::optional<std::vector<char>> dpll_solve(const CNF& cnf);

}  // namespace sirup

#endif  // SIRUP_CNF_HPP
