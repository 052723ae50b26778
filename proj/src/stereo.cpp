#include "posekit/stereo.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

namespace posekit {

namespace {

constexpr double kInfCost = std::numeric_limits<double>::infinity();
constexpr double kVarianceFloor = 1e-10;  // window variance below this is textureless

// Summed-area table, (W+1) x (H+1).
std::vector<double> build_integral(const double* img, int w, int h) {
  std::vector<double> s(static_cast<std::size_t>(w + 1) * (h + 1), 0.0);
  for (int y = 0; y < h; ++y) {
    double row = 0.0;
    const double* src = img + static_cast<std::size_t>(y) * w;
    double* cur = s.data() + static_cast<std::size_t>(y + 1) * (w + 1);
    const double* up = s.data() + static_cast<std::size_t>(y) * (w + 1);
    for (int x = 0; x < w; ++x) {
      row += src[x];
      cur[x + 1] = up[x + 1] + row;
    }
  }
  return s;
}

inline double window_sum(const std::vector<double>& s, int w, int cx, int cy, int half) {
  const int x0 = cx - half, y0 = cy - half, x1 = cx + half + 1, y1 = cy + half + 1;
  const std::size_t stride = static_cast<std::size_t>(w + 1);
  return s[y1 * stride + x1] - s[y0 * stride + x1] - s[y1 * stride + x0] + s[y0 * stride + x0];
}

struct MatchContext {
  const GrayImage* base;
  const GrayImage* other;
  int dir;  // candidate other-x = x + dir * d
  int w, h, half, n;
  std::vector<double> ib, ibb, io, ioo;
  // scratch reused across disparities
  std::vector<double> product;
};

// Visits the ZNCC cost of every pixel whose windows fit at disparity d.
template <typename Fn>
void for_each_cost(MatchContext& ctx, int d, Fn&& fn) {
  const int w = ctx.w, h = ctx.h, half = ctx.half;
  int x_lo = half, x_hi = w - 1 - half;
  if (ctx.dir < 0) {
    x_lo = std::max(x_lo, half + d);
  } else {
    x_hi = std::min(x_hi, w - 1 - half - d);
  }
  if (x_lo > x_hi) return;

  // Product image base(x,y) * other(x + dir*d, y) over the columns any valid
  // window can touch.
  std::fill(ctx.product.begin(), ctx.product.end(), 0.0);
  const int col_lo = x_lo - half, col_hi = x_hi + half;
  for (int y = 0; y < h; ++y) {
    const double* b = ctx.base->pixels.data() + static_cast<std::size_t>(y) * w;
    const double* o = ctx.other->pixels.data() + static_cast<std::size_t>(y) * w;
    double* p = ctx.product.data() + static_cast<std::size_t>(y) * w;
    for (int x = col_lo; x <= col_hi; ++x) p[x] = b[x] * o[x + ctx.dir * d];
  }
  const std::vector<double> ip = build_integral(ctx.product.data(), w, h);

  const double n = static_cast<double>(ctx.n);
  for (int y = half; y <= h - 1 - half; ++y) {
    for (int x = x_lo; x <= x_hi; ++x) {
      const int cx = x + ctx.dir * d;
      const double sb = window_sum(ctx.ib, w, x, y, half);
      const double sbb = window_sum(ctx.ibb, w, x, y, half);
      const double so = window_sum(ctx.io, w, cx, y, half);
      const double soo = window_sum(ctx.ioo, w, cx, y, half);
      const double var_b = sbb - sb * sb / n;
      const double var_o = soo - so * so / n;
      double cost;
      if (var_b < kVarianceFloor || var_o < kVarianceFloor) {
        cost = kInfCost;
      } else {
        const double sbo = window_sum(ip, w, x, y, half);
        const double zncc =
            std::clamp((sbo - sb * so / n) / std::sqrt(var_b * var_o), -1.0, 1.0);
        cost = 1.0 - zncc;
      }
      fn(x, y, cost);
    }
  }
}

void check_matcher_inputs(const GrayImage& left, const GrayImage& right,
                          const MatcherParams& p) {
  require_same_size(left.width, left.height, right.width, right.height, "stereo pair");
  if (p.window < 3 || p.window % 2 == 0) {
    throw ValidationError("matcher: window must be odd and >= 3, got " +
                          std::to_string(p.window));
  }
  if (p.window > left.width || p.window > left.height) {
    throw ValidationError("matcher: window " + std::to_string(p.window) +
                          " larger than image " + std::to_string(left.width) + "x" +
                          std::to_string(left.height));
  }
  if (p.max_disparity < 0 || p.max_disparity >= left.width) {
    throw ValidationError("matcher: max_disparity " + std::to_string(p.max_disparity) +
                          " must lie in [0, width)");
  }
  if (!(p.lr_tolerance >= 0.0) || !(p.uniqueness_ratio > 0.0 && p.uniqueness_ratio <= 1.0)) {
    throw ValidationError("matcher: lr_tolerance must be >= 0 and uniqueness_ratio in (0, 1]");
  }
}

}  // namespace

DisparityMap match_block_one_view(const GrayImage& left, const GrayImage& right,
                                  const MatcherParams& params, StereoView view) {
  check_matcher_inputs(left, right, params);

  MatchContext ctx;
  ctx.base = (view == StereoView::kLeft) ? &left : &right;
  ctx.other = (view == StereoView::kLeft) ? &right : &left;
  ctx.dir = (view == StereoView::kLeft) ? -1 : +1;
  ctx.w = left.width;
  ctx.h = left.height;
  ctx.half = params.window / 2;
  ctx.n = params.window * params.window;
  ctx.ib = build_integral(ctx.base->pixels.data(), ctx.w, ctx.h);
  ctx.io = build_integral(ctx.other->pixels.data(), ctx.w, ctx.h);
  std::vector<double> sq(static_cast<std::size_t>(ctx.w) * ctx.h);
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = ctx.base->pixels[i] * ctx.base->pixels[i];
  ctx.ibb = build_integral(sq.data(), ctx.w, ctx.h);
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = ctx.other->pixels[i] * ctx.other->pixels[i];
  ctx.ioo = build_integral(sq.data(), ctx.w, ctx.h);
  ctx.product.assign(static_cast<std::size_t>(ctx.w) * ctx.h, 0.0);

  const std::size_t size = static_cast<std::size_t>(ctx.w) * ctx.h;
  std::vector<double> best_cost(size, kInfCost);
  std::vector<int> best_d(size, -1);

  // Pass 1: winner-take-all. Increasing d with a strict test breaks ties
  // toward the smallest disparity.
  for (int d = 0; d <= params.max_disparity; ++d) {
    for_each_cost(ctx, d, [&](int x, int y, double c) {
      const std::size_t i = static_cast<std::size_t>(y) * ctx.w + x;
      if (c < best_cost[i]) {
        best_cost[i] = c;
        best_d[i] = d;
      }
    });
  }

  // Pass 2: neighbours of the winner (for the subpixel parabola) and the
  // best cost outside +-1 of the winner (for the uniqueness test).
  constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> prev_cost(size, kNan), next_cost(size, kNan), second_cost(size, kInfCost);
  for (int d = 0; d <= params.max_disparity; ++d) {
    for_each_cost(ctx, d, [&](int x, int y, double c) {
      const std::size_t i = static_cast<std::size_t>(y) * ctx.w + x;
      const int bd = best_d[i];
      if (bd < 0) return;
      if (d == bd - 1) {
        prev_cost[i] = c;
      } else if (d == bd + 1) {
        next_cost[i] = c;
      } else if (d != bd && c < second_cost[i]) {
        second_cost[i] = c;
      }
    });
  }

  DisparityMap out(ctx.w, ctx.h);
  for (int y = 0; y < ctx.h; ++y) {
    for (int x = 0; x < ctx.w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * ctx.w + x;
      if (best_d[i] < 0 || !std::isfinite(best_cost[i])) continue;
      if (std::isfinite(second_cost[i]) &&
          best_cost[i] > params.uniqueness_ratio * second_cost[i]) {
        continue;
      }
      double d = static_cast<double>(best_d[i]);
      if (best_d[i] > 0 && best_d[i] < params.max_disparity && std::isfinite(prev_cost[i]) &&
          std::isfinite(next_cost[i])) {
        const double denom = prev_cost[i] - 2.0 * best_cost[i] + next_cost[i];
        if (denom > 1e-12) {
          d += std::clamp(0.5 * (prev_cost[i] - next_cost[i]) / denom, -0.5, 0.5);
        }
      }
      if (d >= 0.0) out.set(x, y, d);
    }
  }
  return out;
}

DisparityMap match_block(const GrayImage& left, const GrayImage& right,
                         const MatcherParams& params) {
  DisparityMap dl = match_block_one_view(left, right, params, StereoView::kLeft);
  const DisparityMap dr = match_block_one_view(left, right, params, StereoView::kRight);

  for (int y = 0; y < dl.height; ++y) {
    for (int x = 0; x < dl.width; ++x) {
      if (!dl.is_valid(x, y)) continue;
      const double d = dl.at(x, y);
      const int xr = x - static_cast<int>(std::llround(d));
      if (xr < 0 || xr >= dl.width || !dr.is_valid(xr, y) ||
          std::abs(d - dr.at(xr, y)) > params.lr_tolerance) {
        dl.invalidate(x, y);
      }
    }
  }
  return dl;
}

DepthMap disparity_to_depth(const DisparityMap& disp, const StereoRig& rig,
                            double min_disparity_floor) {
  rig.validate();
  DepthMap out(disp.width, disp.height);
  const double fb = rig.intrinsics.fx * rig.baseline_mm;
  for (std::size_t i = 0; i < disp.value.size(); ++i) {
    if (disp.valid[i] && disp.value[i] >= min_disparity_floor) {
      out.value[i] = fb / disp.value[i];
      out.valid[i] = 1;
    }
  }
  return out;
}

DisparityMap depth_to_disparity(const DepthMap& depth, const StereoRig& rig) {
  rig.validate();
  DisparityMap out(depth.width, depth.height);
  const double fb = rig.intrinsics.fx * rig.baseline_mm;
  for (std::size_t i = 0; i < depth.value.size(); ++i) {
    if (depth.valid[i] && depth.value[i] > 0.0) {
      out.value[i] = fb / depth.value[i];
      out.valid[i] = 1;
    }
  }
  return out;
}

namespace {

struct PfmHeader {
  int width = 0;
  int height = 0;
  double scale = 0.0;
  std::size_t data_offset = 0;
};

PfmHeader parse_pfm_header(const std::vector<char>& buf, const std::filesystem::path& path) {
  std::size_t pos = 0;
  auto next_token = [&]() -> std::string {
    while (pos < buf.size() && std::isspace(static_cast<unsigned char>(buf[pos]))) ++pos;
    std::size_t start = pos;
    while (pos < buf.size() && !std::isspace(static_cast<unsigned char>(buf[pos]))) ++pos;
    if (start == pos) throw ParseError(path.string() + ": truncated PFM header");
    return std::string(buf.begin() + start, buf.begin() + pos);
  };

  const std::string magic = next_token();
  if (magic == "PF") {
    throw ParseError(path.string() + ": color PFM not supported, expected grayscale 'Pf'");
  }
  if (magic != "Pf") {
    throw ParseError(path.string() + ": not a PFM file (magic '" + magic + "')");
  }

  PfmHeader h;
  try {
    h.width = std::stoi(next_token());
    h.height = std::stoi(next_token());
    h.scale = std::stod(next_token());
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception&) {
    throw ParseError(path.string() + ": malformed PFM header numbers");
  }
  if (h.width <= 0 || h.height <= 0 || h.width > (1 << 20) || h.height > (1 << 20) ||
      static_cast<std::int64_t>(h.width) * h.height > (std::int64_t{1} << 28)) {
    throw ParseError(path.string() + ": PFM dimension overflow (" + std::to_string(h.width) +
                     "x" + std::to_string(h.height) + ")");
  }
  if (h.scale == 0.0) throw ParseError(path.string() + ": PFM scale must be nonzero");
  // Exactly one whitespace byte separates the header from the raster.
  h.data_offset = pos + 1;
  return h;
}

inline std::uint32_t bswap32(std::uint32_t u) {
  return ((u & 0xff000000u) >> 24) | ((u & 0x00ff0000u) >> 8) | ((u & 0x0000ff00u) << 8) |
         ((u & 0x000000ffu) << 24);
}

inline float read_f32(const char* p, bool little) {
  std::uint32_t u;
  std::memcpy(&u, p, 4);
  const bool host_little = (std::endian::native == std::endian::little);
  if (little != host_little) u = bswap32(u);
  return std::bit_cast<float>(u);
}

}  // namespace

DisparityMap load_disparity_pfm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open PFM file: " + path.string());
  std::vector<char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  const PfmHeader h = parse_pfm_header(buf, path);
  const std::size_t need = static_cast<std::size_t>(h.width) * h.height * 4;
  if (buf.size() < h.data_offset + need) {
    throw ParseError(path.string() + ": truncated PFM raster (need " + std::to_string(need) +
                     " bytes)");
  }

  const bool little = h.scale < 0.0;
  DisparityMap out(h.width, h.height);
  // PFM rows run bottom to top.
  for (int row = 0; row < h.height; ++row) {
    const int y = h.height - 1 - row;
    const char* src = buf.data() + h.data_offset + static_cast<std::size_t>(row) * h.width * 4;
    for (int x = 0; x < h.width; ++x) {
      const double v = read_f32(src + static_cast<std::size_t>(x) * 4, little);
      if (std::isfinite(v) && v > 0.0) out.set(x, y, v);
    }
  }
  return out;
}

void save_disparity_pfm(const DisparityMap& disp, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write PFM file: " + path.string());
  out << "Pf\n" << disp.width << " " << disp.height << "\n-1.0\n";
  std::vector<char> row(static_cast<std::size_t>(disp.width) * 4);
  for (int r = disp.height - 1; r >= 0; --r) {
    for (int x = 0; x < disp.width; ++x) {
      // Invalid pixels persist as -1, which loads back as invalid.
      const float v =
          disp.is_valid(x, r) ? static_cast<float>(disp.at(x, r)) : -1.0f;
      std::uint32_t u = std::bit_cast<std::uint32_t>(v);
      if constexpr (std::endian::native == std::endian::big) u = bswap32(u);
      std::memcpy(row.data() + static_cast<std::size_t>(x) * 4, &u, 4);
    }
    out.write(row.data(), static_cast<std::streamsize>(row.size()));
  }
  if (!out) throw IoError("failed writing PFM file: " + path.string());
}

}  // namespace posekit
