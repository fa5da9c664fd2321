#pragma once

#include <filesystem>
#include <string>

#include "netctl/experiments.hpp"
#include "netctl/network.hpp"
#include "netctl/types.hpp"

namespace netctl {

/// Writes a matrix as plain CSV with enough digits to round-trip doubles
/// exactly.
void write_csv(const std::filesystem::path& path,
               const Eigen::Ref<const Matrix>& m);

/// Reads a CSV written by write_csv. Rows must all have the same width.
Matrix read_csv(const std::filesystem::path& path);

/// Serializes a data record as a directory: U.csv, Ymid.csv, YT.csv,
/// X0.csv (when initial states were recorded), and meta.json holding the
/// dimensions and seed. Ground-truth copies inside noisy records are
/// deliberately not written.
void save_data_matrices(const std::filesystem::path& dir,
                        const DataMatrices& data);

DataMatrices load_data_matrices(const std::filesystem::path& dir);

/// Plain-text network format: a header line "n m p" followed by the rows of
/// A, B, and C in order, whitespace separated. Lines starting with '#' are
/// comments.
void save_network(const std::filesystem::path& path, const LinearNetwork& net,
                  const std::string& comment = "");

LinearNetwork load_network(const std::filesystem::path& path);

}  // namespace netctl
