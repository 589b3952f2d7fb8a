#pragma once

#include <string>
#include <utility>

#include "tdon/constructive.hpp"
#include "tdon/deeponet.hpp"
#include "tdon/ridge1d.hpp"

namespace tdon {

/// Hex-float encoding ("%a") used for every floating-point payload in the
/// model files, so save/load round trips are bit-exact.
std::string to_hex(double x);
double from_hex(const std::string& s);

/// Write-temp-then-rename, so readers never observe a partial file.
void write_file_atomic(const std::string& path, const std::string& content);

// Self-describing model documents (JSON, format_version field). The space
// descriptor travels with the model, including functional weights, so a
// loaded model evaluates without any external context.
void save_deeponet(const TopologicalDeepONet& model, const std::string& path);
TopologicalDeepONet load_deeponet(const std::string& path);

void save_toponet(const MeasurementSpace& space, const TopoNetwork& net, const std::string& path);
std::pair<MeasurementSpace, TopoNetwork> load_toponet(const std::string& path);

void save_ridge_expansion(const Ridge1DExpansion& exp, const std::string& path);
Ridge1DExpansion load_ridge_expansion(const std::string& path);

}  // namespace tdon
