#include "qae/digits.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <string_view>

#include "qae/errors.hpp"

namespace qae {

namespace {

constexpr int kPixelCount = 64;
constexpr int kMaxPixel = 16;

int parse_int_field(std::string_view token, std::size_t line_no, int field_index) {
  // Tolerate surrounding blanks and a trailing CR; digits themselves must be
  // a clean decimal integer.
  while (!token.empty() && (token.front() == ' ' || token.front() == '\t')) {
    token.remove_prefix(1);
  }
  while (!token.empty() &&
         (token.back() == ' ' || token.back() == '\t' || token.back() == '\r')) {
    token.remove_suffix(1);
  }
  int value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size() || token.empty()) {
    throw ParseError("digits CSV line " + std::to_string(line_no) + ": field " +
                     std::to_string(field_index + 1) + " is not an integer: '" +
                     std::string(token) + "'");
  }
  return value;
}

}  // namespace

std::vector<DigitImage> load_digits(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open digits CSV: " + path.string());
  }

  std::vector<DigitImage> images;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;

    DigitImage img;
    std::string_view rest = line;
    int field = 0;
    while (true) {
      const std::size_t comma = rest.find(',');
      const std::string_view token =
          (comma == std::string_view::npos) ? rest : rest.substr(0, comma);
      if (field > kPixelCount) {
        throw ParseError("digits CSV line " + std::to_string(line_no) +
                         ": expected 65 fields, got more");
      }
      const int value = parse_int_field(token, line_no, field);
      if (field < kPixelCount) {
        if (value < 0 || value > kMaxPixel) {
          throw ParseError("digits CSV line " + std::to_string(line_no) + ": pixel " +
                           std::to_string(field) + " out of range [0,16]: " +
                           std::to_string(value));
        }
        img.pixels[static_cast<std::size_t>(field)] = value;
      } else {
        if (value != 0 && value != 1) {
          throw ParseError("digits CSV line " + std::to_string(line_no) +
                           ": label must be 0 or 1, got " + std::to_string(value));
        }
        img.label = value;
      }
      ++field;
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (field != kPixelCount + 1) {
      throw ParseError("digits CSV line " + std::to_string(line_no) + ": expected 65 fields, got " +
                       std::to_string(field));
    }
    images.push_back(img);
  }
  return images;
}

StateVector amplitude_encode(const DigitImage& img) {
  double norm_sq = 0.0;
  for (int p : img.pixels) norm_sq += static_cast<double>(p) * p;
  if (norm_sq == 0.0) {
    throw ArgumentError("all-zero image cannot be amplitude-encoded");
  }
  const double inv_norm = 1.0 / std::sqrt(norm_sq);

  std::vector<complex> amps(kPixelCount);
  for (int i = 0; i < kPixelCount; ++i) {
    amps[static_cast<std::size_t>(i)] = complex(img.pixels[static_cast<std::size_t>(i)] * inv_norm, 0.0);
  }
  return StateVector(6, std::move(amps));
}

TrainingSet build_digits_training_set(const std::vector<DigitImage>& images) {
  if (images.empty()) {
    throw ArgumentError("digits training set needs at least one image");
  }
  TrainingSet set;
  set.entries.reserve(images.size());
  for (std::size_t i = 0; i < images.size(); ++i) {
    const DigitImage& img = images[i];
    char tag[32];
    std::snprintf(tag, sizeof(tag), "digit%d_%02zu", img.label, i);
    const double feature = (img.label == 0) ? 1.0 : 2.0;
    set.entries.push_back({amplitude_encode(img), {feature}, tag});
  }
  return set;
}

}  // namespace qae
