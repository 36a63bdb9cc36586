#pragma once

#include <string>

#include "rst/ensemble.hpp"

namespace rst {

/// Versioned JSON artifact holding the config and every member's theta,
/// knot vector and tree nodes. Doubles are emitted with shortest
/// round-trip precision, so a load/save cycle is prediction-identical.
std::string ensemble_to_json(const RstEnsemble& ensemble);
RstEnsemble ensemble_from_json(const std::string& text);

void save_ensemble(const RstEnsemble& ensemble, const std::string& path);
RstEnsemble load_ensemble(const std::string& path);

}  // namespace rst
