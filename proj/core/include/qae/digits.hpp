#pragma once

#include <array>
#include <filesystem>
#include <vector>

#include "qae/statevector.hpp"
#include "qae/training_set.hpp"

namespace qae {

/// 8x8 gray-scale digit, pixel values 0..16, label 0 or 1.
struct DigitImage {
  std::array<int, 64> pixels{};
  int label = 0;
};

/// Parses the digits CSV (one image per line: 64 row-major pixels then the
/// label, 65 comma-separated integers, no header). Throws ParseError with the
/// offending line number on malformed rows, out-of-range pixels, or unknown
/// labels; IoError if the file cannot be opened. An empty file yields an
/// empty list.
std::vector<DigitImage> load_digits(const std::filesystem::path& path);

/// 6-qubit state whose amplitudes are the row-major pixels divided by their
/// Euclidean norm. All-zero images cannot be normalized -> ArgumentError.
StateVector amplitude_encode(const DigitImage& img);

/// Amplitude-encodes every image; feature vector is (1.0) for label 0 and
/// (2.0) for label 1, tag "digit<label>_<index>". Empty input -> ArgumentError.
TrainingSet build_digits_training_set(const std::vector<DigitImage>& images);

}  // namespace qae
