// Image datasets reduced to 10×10 grayscale vectors in [0, 1].
//
// Readers accept the standard MNIST IDX files (big-endian header, unsigned
// byte pixels) and the CIFAR-10 binary batches (one label byte followed by
// 3072 channel-planar pixel bytes per record). `synthetic_blobs` produces
// an offline stand-in with ten Gaussian classes.
#pragma once

#include "pgdot/core.hpp"

#include <cstdint>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

namespace pgdot {

inline constexpr int kImageSide = 10;
inline constexpr int kImageDim = kImageSide * kImageSide;
inline constexpr int kNumClasses = 10;

struct Dataset {
  Matrix images;            // kImageDim × n, one column per sample
  std::vector<int> labels;  // size n, each in [0, 9]

  int size() const { return static_cast<int>(labels.size()); }
};

/// Row weights for area-average pooling of `in` cells onto `out` cells:
/// output cell j averages the input interval [j·in/out, (j+1)·in/out),
/// with fractional overlap at the edges.
inline Matrix area_pool_weights(int in, int out) {
  Matrix w = Matrix::Zero(out, in);
  const double scale = static_cast<double>(in) / out;
  for (int j = 0; j < out; ++j) {
    const double lo = j * scale, hi = (j + 1) * scale;
    for (int p = 0; p < in; ++p) {
      const double overlap = std::min(hi, p + 1.0) - std::max(lo, static_cast<double>(p));
      if (overlap > 0) w(j, p) = overlap / scale;
    }
  }
  return w;
}

/// Area-average downsampling of a row-major rows×cols image to 10×10,
/// returned as a row-major 100-vector.
inline Vector downsample(const Matrix& image) {
  const Matrix pooled = area_pool_weights(static_cast<int>(image.rows()), kImageSide) * image *
                        area_pool_weights(static_cast<int>(image.cols()), kImageSide).transpose();
  Vector out(kImageDim);
  for (int r = 0; r < kImageSide; ++r) {
    for (int c = 0; c < kImageSide; ++c) out[r * kImageSide + c] = pooled(r, c);
  }
  return out;
}

namespace detail {

inline std::vector<unsigned char> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::uint32_t read_be32(const std::vector<unsigned char>& b, std::size_t off) {
  return (std::uint32_t{b[off]} << 24) | (std::uint32_t{b[off + 1]} << 16) |
         (std::uint32_t{b[off + 2]} << 8) | std::uint32_t{b[off + 3]};
}

inline void check_label(int label, const std::string& path) {
  if (label < 0 || label >= kNumClasses) {
    throw FormatError(path + ": label " + std::to_string(label) + " outside [0, 9]");
  }
}

}  // namespace detail

inline constexpr std::uint32_t kIdxImageMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelMagic = 0x00000801;

struct IdxImages {
  int count = 0, rows = 0, cols = 0;
  std::vector<unsigned char> pixels;
};

inline IdxImages parse_idx_images(const std::vector<unsigned char>& bytes,
                                  const std::string& origin = "idx images") {
  if (bytes.size() < 16) throw FormatError(origin + ": truncated IDX header");
  if (detail::read_be32(bytes, 0) != kIdxImageMagic) {
    throw FormatError(origin + ": bad IDX image magic");
  }
  IdxImages out;
  out.count = static_cast<int>(detail::read_be32(bytes, 4));
  out.rows = static_cast<int>(detail::read_be32(bytes, 8));
  out.cols = static_cast<int>(detail::read_be32(bytes, 12));
  const std::size_t need = static_cast<std::size_t>(out.count) * out.rows * out.cols;
  if (bytes.size() - 16 < need) throw FormatError(origin + ": truncated IDX image data");
  out.pixels.assign(bytes.begin() + 16, bytes.begin() + 16 + static_cast<std::ptrdiff_t>(need));
  return out;
}

inline std::vector<int> parse_idx_labels(const std::vector<unsigned char>& bytes,
                                         const std::string& origin = "idx labels") {
  if (bytes.size() < 8) throw FormatError(origin + ": truncated IDX header");
  if (detail::read_be32(bytes, 0) != kIdxLabelMagic) {
    throw FormatError(origin + ": bad IDX label magic");
  }
  const std::size_t n = detail::read_be32(bytes, 4);
  if (bytes.size() - 8 < n) throw FormatError(origin + ": truncated IDX label data");
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    labels[i] = bytes[8 + i];
    detail::check_label(labels[i], origin);
  }
  return labels;
}

/// limit = 0 loads every sample.
inline Dataset load_mnist_idx(const std::string& images_path, const std::string& labels_path,
                              int limit = 0) {
  const IdxImages img = parse_idx_images(detail::read_file(images_path), images_path);
  const std::vector<int> labels = parse_idx_labels(detail::read_file(labels_path), labels_path);
  if (static_cast<int>(labels.size()) != img.count) {
    throw FormatError(images_path + ": image and label counts differ");
  }
  const int n = limit > 0 ? std::min(limit, img.count) : img.count;
  Dataset ds;
  ds.images.resize(kImageDim, n);
  ds.labels.assign(labels.begin(), labels.begin() + n);
  const std::size_t px = static_cast<std::size_t>(img.rows) * img.cols;
  Matrix m(img.rows, img.cols);
  for (int k = 0; k < n; ++k) {
    for (int r = 0; r < img.rows; ++r) {
      for (int c = 0; c < img.cols; ++c) m(r, c) = img.pixels[k * px + r * img.cols + c] / 255.0;
    }
    ds.images.col(k) = downsample(m);
  }
  return ds;
}

inline constexpr std::size_t kCifarRecord = 3073;
inline constexpr int kCifarSide = 32;

inline Dataset parse_cifar10(const std::vector<unsigned char>& bytes,
                             const std::string& origin = "cifar10", int limit = 0) {
  if (bytes.empty() || bytes.size() % kCifarRecord != 0) {
    throw FormatError(origin + ": size is not a multiple of the 3073-byte record");
  }
  int n = static_cast<int>(bytes.size() / kCifarRecord);
  if (limit > 0) n = std::min(n, limit);
  Dataset ds;
  ds.images.resize(kImageDim, n);
  ds.labels.resize(n);
  constexpr int plane = kCifarSide * kCifarSide;
  Matrix gray(kCifarSide, kCifarSide);
  for (int k = 0; k < n; ++k) {
    const std::size_t base = k * kCifarRecord;
    ds.labels[k] = bytes[base];
    detail::check_label(ds.labels[k], origin);
    for (int r = 0; r < kCifarSide; ++r) {
      for (int c = 0; c < kCifarSide; ++c) {
        const std::size_t p = base + 1 + r * kCifarSide + c;
        gray(r, c) = (bytes[p] + bytes[p + plane] + bytes[p + 2 * plane]) / (3.0 * 255.0);
      }
    }
    ds.images.col(k) = downsample(gray);
  }
  return ds;
}

inline Dataset load_cifar10(const std::vector<std::string>& paths, int limit = 0) {
  Dataset out;
  std::vector<Vector> cols;
  for (const auto& path : paths) {
    const int remaining = limit > 0 ? limit - static_cast<int>(cols.size()) : 0;
    if (limit > 0 && remaining <= 0) break;
    Dataset part = parse_cifar10(detail::read_file(path), path, remaining);
    for (int k = 0; k < part.size(); ++k) {
      cols.push_back(part.images.col(k));
      out.labels.push_back(part.labels[k]);
    }
  }
  out.images.resize(kImageDim, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) out.images.col(k) = cols[k];
  return out;
}

struct BlobSpec {
  int samples = 1280;
  double center_max = 0.6;  // class centers are uniform on [0, center_max]^100
  double noise = 0.1;       // per-pixel standard deviation
  std::uint64_t seed = 1;
};

/// Ten Gaussian clusters in [0, 1]^100 (pixels clamped), labels k mod 10.
inline Dataset synthetic_blobs(const BlobSpec& spec) {
  RngStream rng = derive_stream(spec.seed, streams::kProblemData);
  Matrix centers(kImageDim, kNumClasses);
  for (int k = 0; k < kNumClasses; ++k) {
    for (int j = 0; j < kImageDim; ++j) centers(j, k) = spec.center_max * rng.uniform();
  }
  Dataset ds;
  ds.images.resize(kImageDim, spec.samples);
  ds.labels.resize(spec.samples);
  for (int i = 0; i < spec.samples; ++i) {
    const int label = i % kNumClasses;
    ds.labels[i] = label;
    for (int j = 0; j < kImageDim; ++j) {
      ds.images(j, i) = std::clamp(centers(j, label) + spec.noise * rng.normal(), 0.0, 1.0);
    }
  }
  return ds;
}

}  // namespace pgdot
