#include <algorithm>
#include <cctype>
#include <sstream>
#include <string>
#include <vector>

#include "sirup/base.hpp"
#include "sirup/gadgets.hpp"

namespace sirup {

namespace {

// Splits a netlist line into whitespace-separated tokens, dropping
// anything after '#'.
std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == '#') break;
        if (std::isspace(static_cast<unsigned char>(ch))) {
            if (!cur.empty()) out.push_back(std::move(cur)), cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

bool valid_gate_name(const std::string& s) {
    if (s.empty()) return false;
    for (char ch : s)
        if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_')
            return false;
    return !std::isdigit(static_cast<unsigned char>(s[0]));
}

}  // namespace

std::vector<int> MonotoneCircuit::inputs() const {
    std::vector<int> out;
    for (size_t i = 0; i < gates.size(); ++i)
        if (gates[i].kind == GateKind::Input) out.push_back(static_cast<int>(i));
    return out;
}

int MonotoneCircuit::find_gate(const std::string& name) const {
    for (size_t i = 0; i < gates.size(); ++i)
        if (gates[i].name == name) return static_cast<int>(i);
    return -1;
}

void MonotoneCircuit::validate() const {
    if (gates.empty()) throw DomainError("circuit has no gates");
    for (size_t i = 0; i < gates.size(); ++i) {
        const Gate& g = gates[i];
        if (g.kind == GateKind::Input) {
            if (g.in0 != -1 || g.in1 != -1)
                throw DomainError("input gate '" + g.name + "' has wires");
            continue;
        }
        // Topological order: a gate may only use gates defined before it.
        if (g.in0 < 0 || g.in1 < 0 || g.in0 >= static_cast<int>(i) ||
            g.in1 >= static_cast<int>(i))
            throw DomainError("gate '" + g.name + "' is wired out of order");
    }
    if (output < 0 || output >= static_cast<int>(gates.size()))
        throw DomainError("circuit has no output gate");
    if (gates[output].kind == GateKind::Input)
        throw DomainError("output gate '" + gates[output].name +
                          "' is an input");
}

MonotoneCircuit parse_circuit(const std::string& text) {
    MonotoneCircuit c;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool saw_out = false;
    while (std::getline(in, line)) {
        ++lineno;
        std::vector<std::string> tok = tokenize(line);
        if (tok.empty()) continue;
        if (tok[0] == "in") {
            if (tok.size() != 2 || !valid_gate_name(tok[1]))
                throw ParseError("expected 'in <name>'", lineno, 1);
            if (c.find_gate(tok[1]) != -1)
                throw ParseError("gate '" + tok[1] + "' redefined", lineno, 1);
            c.gates.push_back({tok[1], GateKind::Input, -1, -1});
        } else if (tok[0] == "out") {
            if (tok.size() != 2)
                throw ParseError("expected 'out <name>'", lineno, 1);
            int g = c.find_gate(tok[1]);
            if (g == -1)
                throw ParseError("unknown gate '" + tok[1] + "'", lineno, 1);
            if (saw_out)
                throw ParseError("second 'out' statement", lineno, 1);
            c.output = g;
            saw_out = true;
        } else {
            // name = AND a b   |   name = OR a b
            if (tok.size() != 5 || tok[1] != "=" ||
                (tok[2] != "AND" && tok[2] != "OR") || !valid_gate_name(tok[0]))
                throw ParseError("expected '<name> = AND|OR <a> <b>'", lineno, 1);
            if (c.find_gate(tok[0]) != -1)
                throw ParseError("gate '" + tok[0] + "' redefined", lineno, 1);
            int a = c.find_gate(tok[3]);
            int b = c.find_gate(tok[4]);
            if (a == -1)
                throw ParseError("unknown gate '" + tok[3] + "'", lineno, 1);
            if (b == -1)
                throw ParseError("unknown gate '" + tok[4] + "'", lineno, 1);
            GateKind k = tok[2] == "AND" ? GateKind::And : GateKind::Or;
            c.gates.push_back({tok[0], k, a, b});
        }
    }
    if (!saw_out) throw DomainError("circuit has no 'out' statement");
    c.validate();
    return c;
}

std::string serialize_circuit(const MonotoneCircuit& c) {
    std::ostringstream out;
    for (const Gate& g : c.gates) {
        switch (g.kind) {
            case GateKind::Input:
                out << "in " << g.name << "\n";
                break;
            case GateKind::And:
                out << g.name << " = AND " << c.gates[g.in0].name << " "
                    << c.gates[g.in1].name << "\n";
                break;
            case GateKind::Or:
                out << g.name << " = OR " << c.gates[g.in0].name << " "
                    << c.gates[g.in1].name << "\n";
                break;
        }
    }
    out << "out " << c.gates[c.output].name << "\n";
    return out.str();
}

bool eval_circuit(const MonotoneCircuit& c, const std::vector<bool>& alpha) {
    c.validate();
    std::vector<int> ins = c.inputs();
    if (alpha.size() != ins.size())
        throw DomainError("assignment has " + std::to_string(alpha.size()) +
                          " values for " + std::to_string(ins.size()) +
                          " inputs");
    std::vector<bool> val(c.gates.size(), false);
    for (size_t i = 0; i < ins.size(); ++i) val[ins[i]] = alpha[i];
    for (size_t i = 0; i < c.gates.size(); ++i) {
        const Gate& g = c.gates[i];
        if (g.kind == GateKind::And) val[i] = val[g.in0] && val[g.in1];
        if (g.kind == GateKind::Or) val[i] = val[g.in0] || val[g.in1];
    }
    return val[c.output];
}

namespace {

// Recursively extends a partial circuit until `remaining` hits zero,
// collecting every completed circuit. Wiring slots may reuse any earlier
// gate or claim one fresh input; non-output gates must be consumed later,
// which the final check enforces.
void extend_circuits(MonotoneCircuit& c, int remaining, int next_input,
                     std::vector<MonotoneCircuit>& out) {
    if (remaining == 0) {
        // Keep the circuit when every non-input gate except the last one
        // (the output) feeds some later gate.
        std::vector<bool> used(c.gates.size(), false);
        for (const Gate& g : c.gates) {
            if (g.kind == GateKind::Input) continue;
            used[g.in0] = used[g.in1] = true;
        }
        for (size_t i = 0; i < c.gates.size(); ++i) {
            if (c.gates[i].kind == GateKind::Input) continue;
            if (static_cast<int>(i) != c.output && !used[i]) return;
        }
        out.push_back(c);
        return;
    }
    // Candidate wires: every existing gate, plus at most one fresh input
    // per slot (two fresh inputs when both slots take one).
    int base = static_cast<int>(c.gates.size());
    for (GateKind k : {GateKind::And, GateKind::Or}) {
        for (int a = 0; a <= base; ++a) {
            bool fresh_a = a == base;
            for (int b = a; b <= base + (fresh_a ? 1 : 0); ++b) {
                bool fresh_b = b >= base;
                MonotoneCircuit ext = c;
                int ia = a, ib = b;
                if (fresh_a) {
                    ia = static_cast<int>(ext.gates.size());
                    ext.gates.push_back({"x" + std::to_string(next_input),
                                         GateKind::Input, -1, -1});
                }
                if (fresh_b) {
                    if (b == a) {
                        ib = ia;  // both slots on the same fresh input
                    } else {
                        ib = static_cast<int>(ext.gates.size());
                        ext.gates.push_back(
                            {"x" + std::to_string(next_input + (fresh_a ? 1 : 0)),
                             GateKind::Input, -1, -1});
                    }
                }
                ext.gates.push_back({"g" + std::to_string(remaining),
                                     k, ia, ib});
                ext.output = static_cast<int>(ext.gates.size()) - 1;
                int fresh_used = (fresh_a ? 1 : 0) + (fresh_b && b != a ? 1 : 0);
                extend_circuits(ext, remaining - 1, next_input + fresh_used, out);
            }
        }
    }
}

}  // namespace

std::vector<MonotoneCircuit> enumerate_circuits(int max_non_input) {
    std::vector<MonotoneCircuit> out;
    for (int total = 1; total <= max_non_input; ++total) {
        MonotoneCircuit seed;
        extend_circuits(seed, total, 1, out);
    }
    // Gate names were assigned by countdown; renumber top-down so the
    // serialized form reads naturally.
    for (MonotoneCircuit& c : out) {
        int g = 0;
        for (Gate& gate : c.gates)
            if (gate.kind != GateKind::Input)
                gate.name = "g" + std::to_string(++g);
        c.validate();
    }
    return out;
}

}  // namespace sirup
