#pragma once

// CSV writers for every artifact the CLI emits. Numbers use the shortest
// round-trip representation, so output bytes depend only on the values.
//
//   phases / Z      one row per epoch; columns c<m>_re, c<m>_im
//   spectrum        theta_deg, power, normalized, is_peak
//   trials          trial, method, snr_db, m_elements, mse_deg2, detected_count, flagged
//   sweep           snr_db, method, m_elements, mse_deg2, flagged_fraction, mean_detected, trials
//   beampattern     ap_aoa_deg, theta_deg, b_normalized_db

#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "rispr/experiment.hpp"

namespace rispr {

std::string format_number(double v);

void write_complex_matrix_csv(std::ostream& os, const CMatrix& m);
void write_phases_csv(std::ostream& os, const PhaseShiftMatrix& phases);
void write_spectrum_csv(std::ostream& os, const SpectrumResult& s);
void write_trials_csv(std::ostream& os, const std::vector<TrialReport>& trials);
void write_sweep_csv(std::ostream& os, const std::vector<SweepPoint>& points);
void write_beampattern_csv(std::ostream& os, const BeampatternResult& result);

/// Opens `path` for writing (creating parent directories) and hands the stream
/// to `body`. I/O failures raise std::runtime_error naming the path.
void write_file(const std::string& path, const std::function<void(std::ostream&)>& body);

}  // namespace rispr
