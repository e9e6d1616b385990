#pragma once

#include <string>
#include <vector>

#include "support/random_gen.hpp"
#include "wata/wta.hpp"

namespace wata::testing {

/// One state q over nat; alpha -> q with 1, sigma(q, q) -> q with `sigma_weight`,
/// final weight 1.
inline Wta one_state_nat(long sigma_weight, std::string name) {
    Semiring sr(Carrier::natural);
    WtaBuilder b(sr, RankedAlphabet({{"alpha", 0}, {"sigma", 2}}));
    b.add_state("q");
    b.set_final("q", sr.one());
    b.set_transition("alpha", {}, "q", sr.one());
    b.set_transition("sigma", {"q", "q"}, "q", sr.make(sigma_weight));
    return b.build(std::move(name));
}

inline Wta m_one() { return one_state_nat(1, "m_one"); }
inline Wta m_two() { return one_state_nat(2, "m_two"); }

/// A dense-ish random automaton; roughly `zero_chance` out of 4 weights are 0.
inline Wta random_wta(Rng& rng, const Semiring& sr, const RankedAlphabet& alphabet,
                      std::size_t states, long max_abs = 3, int zero_chance = 2) {
    WtaBuilder b(sr, alphabet);
    std::vector<std::string> names;
    for (std::size_t i = 0; i < states; ++i) {
        names.push_back("q" + std::to_string(i));
        b.add_state(names.back());
    }
    auto weight = [&]() -> Value {
        if (rand_long(rng, 0, 3) < zero_chance) return sr.zero();
        return random_nonzero_value(rng, sr, max_abs);
    };
    for (const std::string& q : names) {
        Value w = weight();
        if (!w.is_zero()) b.set_final(q, w);
    }
    for (const Symbol& sym : alphabet.symbols()) {
        if (states == 0 && sym.rank > 0) continue;
        std::vector<std::size_t> tuple(sym.rank, 0);
        for (;;) {
            std::vector<std::string> children;
            for (std::size_t t : tuple) children.push_back(names[t]);
            for (const std::string& q : names) {
                Value w = weight();
                if (!w.is_zero()) b.set_transition(sym.name, children, q, w);
            }
            std::size_t pos = 0;
            while (pos < tuple.size() && ++tuple[pos] == states) tuple[pos++] = 0;
            if (pos == tuple.size()) break;
        }
    }
    return b.build("random");
}

} // namespace wata::testing
