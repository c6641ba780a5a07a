#ifndef SIRUP_BASE_HPP
#define SIRUP_BASE_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sirup {

// Node/individual labels, kept as a small bitmask. F and T are the two
// covering concepts; A marks individuals the covering axiom applies to.
inline constexpr uint8_t kF = 1;
inline constexpr uint8_t kT = 2;
inline constexpr uint8_t kA = 4;
using LabelSet = uint8_t;

inline bool has_label(LabelSet s, uint8_t l) { return (s & l) != 0; }

std::string label_set_to_string(LabelSet s);

// Ontology variants: the covering axiom ranges over A-individuals (CovA)
// or over every individual (CovTop); the *Bot forms add disjointness of
// F and T.
enum class Ontology { CovA, CovABot, CovTop, CovTopBot };

inline bool is_disjoint(Ontology o) {
    return o == Ontology::CovABot || o == Ontology::CovTopBot;
}
inline bool is_total(Ontology o) {
    return o == Ontology::CovTop || o == Ontology::CovTopBot;
}

const char* ontology_name(Ontology o);
// Accepts the CLI spellings "sirup", "ddsirup", "topsirup", "topddsirup".
Ontology parse_ontology(const std::string& name);

// Error taxonomy. DomainError covers violated preconditions and malformed
// inputs discovered past parsing; ParseError carries a source position;
// BudgetError marks an exceeded enumeration/clause cap and is recoverable
// (callers may degrade to an "inconclusive" result).
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DomainError : Error {
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

struct ParseError : Error {
    int line;
    int col;
    ParseError(const std::string& msg, int line_, int col_)
        : Error(msg + " (line " + std::to_string(line_) + ", column " +
                std::to_string(col_) + ")"),
          line(line_), col(col_) {}
};

struct BudgetError : Error {
    explicit BudgetError(const std::string& msg) : Error(msg) {}
};

// Fresh-name source: a monotone counter under a namespace prefix, so
// constructions that stamp out many copies stay collision-free and
// reproducible.
class NameGen {
public:
    explicit NameGen(std::string prefix) : prefix_(std::move(prefix)) {}

    std::string fresh() { return prefix_ + std::to_string(counter_++); }

    std::string fresh(const std::string& base) {
        return prefix_ + std::to_string(counter_++) + "_" + base;
    }

private:
    std::string prefix_;
    uint64_t counter_ = 0;
};

}  // namespace sirup

#endif  // SIRUP_BASE_HPP
