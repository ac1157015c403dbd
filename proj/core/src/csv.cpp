#include "rispr/csv.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>

namespace rispr {

std::string format_number(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void write_complex_matrix_csv(std::ostream& os, const CMatrix& m)
{
    for (Eigen::Index c = 0; c < m.cols(); ++c)
        os << (c ? "," : "") << 'c' << c << "_re,c" << c << "_im";
    os << '\n';
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            os << (c ? "," : "") << format_number(m(r, c).real()) << ','
               << format_number(m(r, c).imag());
        os << '\n';
    }
}

void write_phases_csv(std::ostream& os, const PhaseShiftMatrix& phases)
{
    write_complex_matrix_csv(os, phases.values());
}

void write_spectrum_csv(std::ostream& os, const SpectrumResult& s)
{
    os << "theta_deg,power,normalized,is_peak\n";
    std::vector<bool> peak(s.grid.size(), false);
    for (auto i : s.peak_indices)
        peak[static_cast<std::size_t>(i)] = true;
    for (std::size_t g = 0; g < s.grid.size(); ++g) {
        const auto i = static_cast<Eigen::Index>(g);
        os << format_number(s.grid[g]) << ',' << format_number(s.power(i)) << ','
           << format_number(s.normalized(i)) << ',' << (peak[g] ? 1 : 0) << '\n';
    }
}

void write_trials_csv(std::ostream& os, const std::vector<TrialReport>& trials)
{
    os << "trial,method,snr_db,m_elements,mse_deg2,detected_count,flagged\n";
    for (const auto& t : trials)
        os << t.trial << ',' << to_string(t.method) << ',' << format_number(t.snr_db) << ','
           << t.m_elements << ',' << format_number(t.mse) << ',' << t.detected_count << ','
           << (t.flagged ? 1 : 0) << '\n';
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepPoint>& points)
{
    os << "snr_db,method,m_elements,mse_deg2,flagged_fraction,mean_detected,trials\n";
    for (const auto& p : points)
        os << format_number(p.snr_db) << ',' << to_string(p.method) << ',' << p.m_elements << ','
           << format_number(p.mse) << ',' << format_number(p.flagged_fraction) << ','
           << format_number(p.mean_detected) << ',' << p.trials << '\n';
}

void write_beampattern_csv(std::ostream& os, const BeampatternResult& result)
{
    os << "ap_aoa_deg,theta_deg,b_normalized_db\n";
    for (const auto& c : result.curves)
        for (std::size_t g = 0; g < result.grid.size(); ++g)
            os << format_number(c.ap_aoa_deg) << ',' << format_number(result.grid[g]) << ','
               << format_number(c.normalized_db(static_cast<Eigen::Index>(g))) << '\n';
}

void write_file(const std::string& path, const std::function<void(std::ostream&)>& body)
{
    namespace fs = std::filesystem;
    const fs::path p(path);
    std::error_code ec;
    if (p.has_parent_path())
        fs::create_directories(p.parent_path(), ec);
    if (ec)
        throw std::runtime_error("cannot create directory for '" + path + "': " + ec.message());
    std::ofstream out(p, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open '" + path + "' for writing");
    body(out);
    out.flush();
    if (!out)
        throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace rispr
