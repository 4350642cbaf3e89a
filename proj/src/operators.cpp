#include "fcdg/operators.hpp"

#include <bit>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <map>
#include <mutex>
#include <sstream>
#include <tuple>

#include "fcdg/error.hpp"
#include "fcdg/quadrature.hpp"

namespace fcdg {

std::string describe(const BasisId& id) {
  std::ostringstream os;
  switch (id.kind) {
    case BasisKind::FcExtended:
    case BasisKind::FcDouble:
      os << "fc(N=" << id.n_points << ", p=" << id.poly_points << ", M=" << id.ext_points
         << ", gregory=" << id.quad_order
         << (id.kind == BasisKind::FcDouble ? ", double" : ", extended") << ")";
      break;
    case BasisKind::Legendre:
      os << "legendre(q=" << id.n_points - 1 << ")";
      break;
  }
  return os.str();
}

BasisId fc_basis_id(const FcParams& params, const QuadratureConfig& quad) {
  BasisId id;
  id.kind = params.precision == Precision::Extended ? BasisKind::FcExtended : BasisKind::FcDouble;
  id.n_points = params.n_points;
  id.poly_points = params.poly_points;
  id.ext_points = params.ext_points;
  id.quad_order = quad.gregory_order;
  return id;
}

namespace {

std::string sci(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

struct Sampled {
  int nq = 0;
  std::vector<Extended> values;  // basis-major: values[i * nq + q]
  std::vector<Extended> derivs;
};

template <typename Real>
Sampled sample_basis(const FcParams& params, int factor) {
  const int n = params.n_points;
  const int nq = (n - 1) * factor + 1;
  const Real period_len = Real(2) * Real(params.period_points()) / Real(n - 1);
  Sampled s;
  s.nq = nq;
  s.values.resize(static_cast<std::size_t>(n) * nq);
  s.derivs.resize(static_cast<std::size_t>(n) * nq);
  std::vector<Real> unit(n, Real(0));
  for (int i = 0; i < n; ++i) {
    std::fill(unit.begin(), unit.end(), Real(0));
    unit[i] = 1;
    const auto ext = fc::periodic_extension<Real>(unit, params);
    const auto v = quad::fourier_interpolate<Real>(ext, factor, 0, period_len);
    const auto d = quad::fourier_interpolate<Real>(ext, factor, 1, period_len);
    for (int q = 0; q < nq; ++q) {
      s.values[static_cast<std::size_t>(i) * nq + q] = Extended(v[q]);
      s.derivs[static_cast<std::size_t>(i) * nq + q] = Extended(d[q]);
    }
  }
  return s;
}

}  // namespace

ElementOperators assemble_fc_operators(const FcParams& params, const QuadratureConfig& quad) {
  params.validate();
  if (quad.points_per_period < 1) {
    throw ParameterError("points_per_period must be positive");
  }
  const int n = params.n_points;
  const int target = quad.points_per_period * params.period_points();
  const int factor = std::max(1, (target - 1 + (n - 2)) / (n - 1));
  const Sampled s = params.precision == Precision::Extended
                        ? sample_basis<Extended>(params, factor)
                        : sample_basis<double>(params, factor);
  const int nq = s.nq;
  int order = quad.gregory_order;
  if (nq < 2 * gregory_stencil_width(order)) order = std::min(order, 8);
  const auto w = quad::gregory_weights<Extended>(nq, order);

  ElementOperators ops;
  ops.mass.resize(n, n);
  ops.stiffness.resize(n, n);
  ops.lift_left.resize(n);
  ops.lift_right.resize(n);
  std::vector<Extended> wv(nq);
  for (int j = 0; j < n; ++j) {
    const Extended* vj = &s.values[static_cast<std::size_t>(j) * nq];
    for (int q = 0; q < nq; ++q) wv[q] = w[q] * vj[q];
    for (int i = 0; i < n; ++i) {
      const Extended* vi = &s.values[static_cast<std::size_t>(i) * nq];
      const Extended* di = &s.derivs[static_cast<std::size_t>(i) * nq];
      Extended sd = 0;
      for (int q = 0; q < nq; ++q) sd += di[q] * wv[q];
      ops.stiffness(i, j) = static_cast<double>(sd);
      if (i <= j) {
        Extended sm = 0;
        for (int q = 0; q < nq; ++q) sm += vi[q] * wv[q];
        ops.mass(i, j) = ops.mass(j, i) = static_cast<double>(sm);
      }
    }
    ops.lift_left(j) = static_cast<double>(vj[0]);
    ops.lift_right(j) = static_cast<double>(vj[nq - 1]);
  }
  ops.basis_id = fc_basis_id(params, quad);
  ops.basis_id.quad_order = order;
  finalize_operators(ops);
  validate_operators(ops);
  return ops;
}

void finalize_operators(ElementOperators& ops) {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(ops.mass);
  ops.inv_mass_stiffness = lu.solve(ops.stiffness);
}

double condition_number(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw ShapeError("condition_number needs a nonempty square matrix");
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  if (!(smin > 0.0) || !std::isfinite(sv(0))) {
    throw NumericError("condition_number: matrix is singular");
  }
  return sv(0) / smin;
}

void validate_operators(const ElementOperators& ops) {
  const int n = ops.size();
  auto fail = [&](const std::string& what) {
    throw IntegrityError(describe(ops.basis_id) + ": " + what);
  };
  if (ops.mass.cols() != n || ops.stiffness.rows() != n || ops.stiffness.cols() != n ||
      ops.lift_left.size() != n || ops.lift_right.size() != n ||
      ops.inv_mass_stiffness.rows() != n || ops.inv_mass_stiffness.cols() != n) {
    fail("operator dimensions disagree");
  }
  if (!ops.mass.allFinite() || !ops.stiffness.allFinite() || !ops.inv_mass_stiffness.allFinite() ||
      !ops.lift_left.allFinite() || !ops.lift_right.allFinite()) {
    fail("non-finite entries");
  }
  const double mscale = ops.mass.cwiseAbs().maxCoeff();
  if ((ops.mass - ops.mass.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, mscale)) {
    fail("mass matrix is not symmetric");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(ops.mass);
  if (llt.info() != Eigen::Success) fail("mass matrix is not positive definite");
  const Eigen::MatrixXd sbp = ops.stiffness + ops.stiffness.transpose() -
                              ops.lift_right * ops.lift_right.transpose() +
                              ops.lift_left * ops.lift_left.transpose();
  if (sbp.cwiseAbs().maxCoeff() > 1e-9) {
    fail("summation-by-parts identity violated by " + sci(sbp.cwiseAbs().maxCoeff()));
  }
  const double sscale = ops.stiffness.cwiseAbs().maxCoeff();
  const double resid = (ops.mass * ops.inv_mass_stiffness - ops.stiffness).cwiseAbs().maxCoeff();
  if (resid > 1e-10 * std::max(1.0, sscale)) fail("inv_mass_stiffness is inconsistent");
  if (ops.basis_id.kind != BasisKind::Legendre) {
    Eigen::VectorXd e0 = Eigen::VectorXd::Zero(n), e1 = Eigen::VectorXd::Zero(n);
    e0(0) = 1.0;
    e1(n - 1) = 1.0;
    if ((ops.lift_left - e0).cwiseAbs().maxCoeff() > 1e-11 ||
        (ops.lift_right - e1).cwiseAbs().maxCoeff() > 1e-11) {
      fail("FC lift vectors are not nodal");
    }
  }
}

namespace {

constexpr char kMagic[4] = {'F', 'C', 'D', 'G'};
constexpr std::uint32_t kFormatVersion = 1;

class ByteWriter {
 public:
  void u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t v) {
    for (int b = 0; b < 4; ++b) u8(static_cast<std::uint8_t>(v >> (8 * b)));
  }
  void u64(std::uint64_t v) {
    for (int b = 0; b < 8; ++b) u8(static_cast<std::uint8_t>(v >> (8 * b)));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void raw(const char* p, std::size_t n) { buf_.insert(buf_.end(), p, p + n); }
  std::size_t size() const { return buf_.size(); }
  const std::vector<char>& bytes() const { return buf_; }

 private:
  std::vector<char> buf_;
};

class ByteReader {
 public:
  explicit ByteReader(const std::vector<char>& b) : buf_(b) {}
  std::uint8_t u8() {
    need(1);
    return static_cast<std::uint8_t>(buf_[pos_++]);
  }
  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (int b = 0; b < 4; ++b) v |= std::uint32_t{u8()} << (8 * b);
    return v;
  }
  std::uint64_t u64() {
    std::uint64_t v = 0;
    for (int b = 0; b < 8; ++b) v |= std::uint64_t{u8()} << (8 * b);
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  std::size_t pos() const { return pos_; }
  std::size_t remaining() const { return buf_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > buf_.size()) throw FormatError("operator cache is truncated");
  }
  const std::vector<char>& buf_;
  std::size_t pos_ = 0;
};

std::uint64_t fnv1a(const char* p, std::size_t n) {
  std::uint64_t h = 14695981039346656037ull;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= static_cast<unsigned char>(p[i]);
    h *= 1099511628211ull;
  }
  return h;
}

void put_matrix(ByteWriter& w, const Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) w.f64(m(i, j));
  }
}

Eigen::MatrixXd get_matrix(ByteReader& r, int rows, int cols) {
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = r.f64();
  }
  return m;
}

}  // namespace

void store_cache(const ElementOperators& ops, const std::filesystem::path& path) {
  const int n = ops.size();
  ByteWriter w;
  w.raw(kMagic, 4);
  w.u32(kFormatVersion);
  w.u8(static_cast<std::uint8_t>(ops.basis_id.kind));
  w.u32(static_cast<std::uint32_t>(ops.basis_id.n_points));
  w.u32(static_cast<std::uint32_t>(ops.basis_id.poly_points));
  w.u32(static_cast<std::uint32_t>(ops.basis_id.ext_points));
  w.u32(static_cast<std::uint32_t>(ops.basis_id.quad_order));
  const std::size_t payload_start = w.size();
  put_matrix(w, ops.mass);
  put_matrix(w, ops.stiffness);
  put_matrix(w, ops.lift_left.transpose());
  put_matrix(w, ops.lift_right.transpose());
  put_matrix(w, ops.inv_mass_stiffness);
  if (ops.basis_id.n_points != n) throw ShapeError("basis id does not match operator size");
  const auto& bytes = w.bytes();
  w.u64(fnv1a(bytes.data() + payload_start, bytes.size() - payload_start));

  auto tmp = path;
  tmp += ".tmp" + std::to_string(std::rand());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out.write(w.bytes().data(), static_cast<std::streamsize>(w.bytes().size()));
    if (!out) throw Error("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

ElementOperators load_cache(const std::filesystem::path& path,
                            const std::optional<BasisId>& expected) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open operator cache " + path.string());
  const std::vector<char> bytes((std::istreambuf_iterator<char>(in)),
                                std::istreambuf_iterator<char>());
  ByteReader r(bytes);
  char magic[4];
  for (char& c : magic) c = static_cast<char>(r.u8());
  if (!std::equal(magic, magic + 4, kMagic)) throw FormatError("bad magic in " + path.string());
  const auto version = r.u32();
  if (version != kFormatVersion) {
    throw FormatError("unsupported cache version " + std::to_string(version));
  }
  ElementOperators ops;
  const auto kind = r.u8();
  if (kind < 1 || kind > 3) throw FormatError("unknown basis kind " + std::to_string(kind));
  ops.basis_id.kind = static_cast<BasisKind>(kind);
  ops.basis_id.n_points = static_cast<int>(r.u32());
  ops.basis_id.poly_points = static_cast<int>(r.u32());
  ops.basis_id.ext_points = static_cast<int>(r.u32());
  ops.basis_id.quad_order = static_cast<int>(r.u32());
  const int n = ops.basis_id.n_points;
  if (n < 1 || n > 100000) throw FormatError("implausible operator size " + std::to_string(n));
  const std::size_t payload = (3 * std::size_t(n) * n + 2 * std::size_t(n)) * 8;
  if (r.remaining() != payload + 8) throw FormatError("operator cache is truncated or padded");
  const std::size_t payload_start = r.pos();
  ops.mass = get_matrix(r, n, n);
  ops.stiffness = get_matrix(r, n, n);
  ops.lift_left = get_matrix(r, 1, n).transpose();
  ops.lift_right = get_matrix(r, 1, n).transpose();
  ops.inv_mass_stiffness = get_matrix(r, n, n);
  const std::uint64_t sum = r.u64();
  if (sum != fnv1a(bytes.data() + payload_start, payload)) {
    throw IntegrityError("checksum mismatch in " + path.string());
  }
  if (expected && !(*expected == ops.basis_id)) {
    throw IntegrityError("cache holds " + describe(ops.basis_id) + " but " +
                         describe(*expected) + " was requested");
  }
  validate_operators(ops);
  return ops;
}

ElementOperators fc_operators(const FcParams& params, const QuadratureConfig& quad) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, int, int, int, int>, ElementOperators> memo;
  const auto key = std::make_tuple(params.n_points, params.poly_points, params.ext_points,
                                   static_cast<int>(params.precision), quad.gregory_order,
                                   quad.points_per_period);
  std::lock_guard<std::mutex> lock(mu);
  if (auto it = memo.find(key); it != memo.end()) return it->second;

  std::optional<std::filesystem::path> file;
  if (const char* dir = std::getenv("FCDG_CACHE_DIR"); dir && *dir) {
    std::ostringstream name;
    name << "fc_N" << params.n_points << "_p" << params.poly_points << "_M" << params.ext_points
         << "_g" << quad.gregory_order << "_s" << quad.points_per_period
         << (params.precision == Precision::Extended ? "_ext" : "_dbl") << ".bin";
    file = std::filesystem::path(dir) / name.str();
  }
  ElementOperators ops;
  bool loaded = false;
  if (file && std::filesystem::exists(*file)) {
    try {
      ops = load_cache(*file);
      const BasisId want = fc_basis_id(params, quad);
      loaded = ops.basis_id.kind == want.kind && ops.basis_id.n_points == want.n_points &&
               ops.basis_id.poly_points == want.poly_points &&
               ops.basis_id.ext_points == want.ext_points;
    } catch (const Error&) {
      loaded = false;
    }
  }
  if (!loaded) {
    ops = assemble_fc_operators(params, quad);
    if (file) {
      std::filesystem::create_directories(file->parent_path());
      store_cache(ops, *file);
    }
  }
  memo.emplace(key, ops);
  return ops;
}

}  // namespace fcdg
