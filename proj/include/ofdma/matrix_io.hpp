// SPDX-License-Identifier: Apache-2.0

#ifndef OFDMA_MATRIX_IO_HPP
#define OFDMA_MATRIX_IO_HPP

#include <string>

#include "ofdma/matrix.hpp"

namespace ofdma {

// Matrix file format: one header line `# K=<k> N=<n> seed=<u64>`, then K
// lines of N comma-separated gains in scientific notation with 9 digits
// after the decimal point (10 significant digits).  Missing entries are the
// literal token `NaN`.

std::string matrix_to_csv(const ChannelMatrix& m);
std::string matrix_to_csv(const MaskedChannelMatrix& m);

void save_matrix(const ChannelMatrix& m, const std::string& path);
void save_matrix(const MaskedChannelMatrix& m, const std::string& path);

/// Reads a matrix that may contain NaN tokens.
MaskedChannelMatrix load_masked_matrix(const std::string& path);

/// Reads a complete matrix; NaN tokens are a ConfigError.
ChannelMatrix load_matrix(const std::string& path);

/// Locale-independent scientific formatting, >= 9 significant digits.
std::string format_sci(double v);

}  // namespace ofdma

#endif  // OFDMA_MATRIX_IO_HPP
