#include "solitonchain/csv.hpp"

#include <array>
#include <charconv>

namespace solitonchain::csv {

std::string number(double x) {
    std::array<char, 40> buf{};
    const auto           res = std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::general, 12);
    return {buf.data(), res.ptr};
}

void write_trace(std::ostream &out, const ProtocolTrace &trace) {
    const bool with_reference = !trace.fidelity_reference.empty();
    out << (with_reference ? "t,fidelity_initial,fidelity_reference,eof\n" : "t,fidelity_initial,eof\n");
    for(std::size_t i = 0; i < trace.t.size(); ++i) {
        out << number(trace.t[i]) << ',' << number(trace.fidelity_initial[i]) << ',';
        if(with_reference) out << number(trace.fidelity_reference[i]) << ',';
        out << number(trace.eof[i]) << '\n';
    }
}

void write_ensemble(std::ostream &out, const std::vector<EnsembleStats> &results) {
    out << "kind,level_E,n,mean_eof,std,sem,scenario\n";
    for(const auto &r : results)
        for(const auto &s : r.levels)
            out << to_string(r.kind) << ',' << number(s.level) << ',' << s.count << ',' << number(s.mean) << ',' << number(s.std) << ','
                << number(s.sem) << ',' << r.scenario << '\n';
}

void write_spectrum(std::ostream &out, const SpectrumStats &stats) {
    out << "index,mean_energy,std_energy\n";
    for(std::size_t i = 0; i < stats.mean.size(); ++i) out << i << ',' << number(stats.mean[i]) << ',' << number(stats.std[i]) << '\n';
}

void write_async(std::ostream &out, const std::vector<AsyncPoint> &points) {
    out << "delay,eof\n";
    for(const auto &p : points) out << number(p.delay) << ',' << number(p.eof) << '\n';
}

void write_modes(std::ostream &out, const ModeReport &report) {
    out << "mode,energy";
    const std::size_t sites = report.occupations.empty() ? 0 : report.occupations.front().size();
    for(std::size_t s = 0; s < sites; ++s) out << ",occupation_" << s;
    out << '\n';
    for(std::size_t m = 0; m < report.energies.size(); ++m) {
        out << m << ',' << number(report.energies[m]);
        for(double o : report.occupations[m]) out << ',' << number(o);
        out << '\n';
    }
}

} // namespace solitonchain::csv
