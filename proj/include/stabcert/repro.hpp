#ifndef STABCERT_REPRO_HPP
#define STABCERT_REPRO_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace stabcert {

/// One checked constant of a reproduction recipe.
struct ReproCheck {
    std::string label;
    double value = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;  // absolute; pass iff |value - expected| <= tolerance
    bool pass = false;
    std::string note;
};

struct ReproOutcome {
    std::string id;
    std::vector<ReproCheck> checks;
    std::vector<std::string> emitted_files;
    std::vector<std::string> notes;
    bool all_pass = true;
};

/// Reproduction recipes for the worked examples and figures. Valid ids:
/// ex2, ex3, ex4, ex6, ex8, ex9, fig1, fig2, fig3, fig4.
ReproOutcome run_repro(const std::string& id, const std::string& out_dir, std::uint64_t seed,
                       int threads);

std::vector<std::string> repro_ids();

}  // namespace stabcert

#endif
