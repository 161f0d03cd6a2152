#pragma once

#include "qns/polyspectra.hpp"
#include "qns/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace qns {

// Frequency-grid spectrum with provenance. Axes are angular frequencies in
// internal units; writers convert to ordinary frequency on output.
struct SpectrumGrid {
    int order = 2;                       // 2, 3, or 4
    std::string kind = "full";           // "full" or "s4-correlation-cut"
    std::vector<double> axis1, axis2;    // axis2 empty for 1-D grids
    std::vector<cxd> values;             // row-major [i1 * n2 + i2] for 2-D
    double beta = 0;
    std::uint64_t model_hash = 0;
    std::string model_label;
    double time_unit_seconds = 1.0;
    std::string freq_unit;

    void validate() const;               // axes increasing, values finite, order-2 reality
};

// Grid evaluators. workers == 1 runs the serial reference loop; workers > 1
// runs the OpenMP kernel over grid points. Both paths produce identical
// values (points are independent; no cross-point reduction).
SpectrumGrid eval_s2_grid(const Liouvillian& l, const std::vector<double>& omegas, double beta,
                          bool include_shot_noise, int workers);
SpectrumGrid eval_s3_grid(const Liouvillian& l, const std::vector<double>& w1s,
                          const std::vector<double>& w2s, double beta, int workers);
SpectrumGrid eval_s4cut_grid(const Liouvillian& l, const std::vector<double>& w1s,
                             const std::vector<double>& w2s, double beta, int workers);

std::vector<double> linspace(double lo, double hi, int n);

// CSV: 1-D grids as (frequency, value) rows; 2-D grids as a matrix with the
// first row/column carrying the axes. JSON sidecar holds metadata and, for
// 2-D complex grids, both parts. Frequencies written in ordinary units
// (axis / 2 pi).
void write_spectrum_csv(const std::string& path, const SpectrumGrid& g);
void write_spectrum_json(const std::string& path, const SpectrumGrid& g, const std::string& extra_meta_json = "");

} // namespace qns
