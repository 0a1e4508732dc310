#pragma once

#include "solitonchain/disorder.hpp"
#include "solitonchain/protocols.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace solitonchain::csv {

/// Decimal with 12 significant digits, '.' separator, independent of locale.
std::string number(double x);

/// t, fidelity_initial[, fidelity_reference], eof
void write_trace(std::ostream &out, const ProtocolTrace &trace);

/// kind, level_E, n, mean_eof, std, sem, scenario; one row per level and scenario.
void write_ensemble(std::ostream &out, const std::vector<EnsembleStats> &results);

/// index, mean_energy, std_energy
void write_spectrum(std::ostream &out, const SpectrumStats &stats);

/// delay, eof
void write_async(std::ostream &out, const std::vector<AsyncPoint> &points);

/// mode, energy, occupation_0 ... occupation_{N-1}
void write_modes(std::ostream &out, const ModeReport &report);

} // namespace solitonchain::csv
