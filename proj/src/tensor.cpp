#include "npd/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "npd/errors.hpp"

namespace npd::ad {

namespace {

std::size_t shape_numel(const std::vector<std::size_t>& shape) {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return n;
}

std::string shape_str(const std::vector<std::size_t>& shape) {
  std::string s = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += "x";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

void check_finite(const std::vector<double>& values, const char* op_name) {
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw NumericalError(std::string(op_name) +
                           ": produced a non-finite value");
    }
  }
}

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (a.shape() != b.shape()) {
    throw UsageError(std::string(op) + ": shape mismatch " +
                     shape_str(a.shape()) + " vs " + shape_str(b.shape()));
  }
}

void require_same_tape(const Tensor& a, const Tensor& b, const char* op) {
  if (a.tape() != b.tape()) {
    throw UsageError(std::string(op) + ": operands live on different tapes");
  }
}

}  // namespace

const std::vector<std::size_t>& Tensor::shape() const {
  return tape_->node(id_).shape;
}
std::size_t Tensor::numel() const { return tape_->node(id_).values.size(); }
std::size_t Tensor::rows() const {
  const auto& s = shape();
  return s.empty() ? 1 : s[0];
}
std::size_t Tensor::cols() const {
  const auto& s = shape();
  return s.size() < 2 ? 1 : s[1];
}
const std::vector<double>& Tensor::values() const {
  return tape_->node(id_).values;
}
const std::vector<double>& Tensor::grad() const {
  const auto& n = tape_->node(id_);
  if (!n.requires_grad) {
    throw UsageError("Tensor::grad: tensor does not track gradients");
  }
  return n.grad;
}
bool Tensor::requires_grad() const { return tape_->node(id_).requires_grad; }
double Tensor::scalar() const {
  if (numel() != 1) {
    throw UsageError("Tensor::scalar: tensor has " + std::to_string(numel()) +
                     " elements");
  }
  return values()[0];
}

Tensor Tape::leaf(std::vector<std::size_t> shape, std::vector<double> values,
                  bool requires_grad) {
  if (values.size() != shape_numel(shape)) {
    throw UsageError("Tape::leaf: " + std::to_string(values.size()) +
                     " values for shape " + shape_str(shape));
  }
  check_finite(values, "leaf");
  Node n;
  n.shape = std::move(shape);
  n.values = std::move(values);
  n.requires_grad = requires_grad;
  if (requires_grad) n.grad.assign(n.values.size(), 0.0);
  nodes_.push_back(std::move(n));
  return Tensor(this, nodes_.size() - 1);
}

Tensor Tape::constant(std::vector<std::size_t> shape,
                      std::vector<double> values) {
  return leaf(std::move(shape), std::move(values), false);
}

Tensor Tape::scalar_constant(double v) { return constant({}, {v}); }

void Tape::backward(const Tensor& loss) {
  if (loss.tape() != this) {
    throw UsageError("Tape::backward: loss lives on another tape");
  }
  if (loss.numel() != 1) {
    throw UsageError("Tape::backward: loss must be a scalar, got shape " +
                     shape_str(loss.shape()));
  }
  Node& ln = node(loss.id());
  if (!ln.requires_grad) return;  // nothing reachable
  for (Node& n : nodes_) {
    n.touched = false;
    if (n.requires_grad) std::fill(n.grad.begin(), n.grad.end(), 0.0);
  }
  ln.grad[0] = 1.0;
  ln.touched = true;
  for (std::size_t id = loss.id() + 1; id-- > 0;) {
    Node& n = node(id);
    if (n.touched && n.backprop) n.backprop(*this, id);
  }
}

void Tape::zero_grad() {
  for (Node& n : nodes_) {
    n.touched = false;
    if (n.requires_grad) std::fill(n.grad.begin(), n.grad.end(), 0.0);
  }
}

const std::vector<double>& Tape::values_of(std::size_t id) const {
  return nodes_[id].values;
}

const std::vector<double>& Tape::grad_of(std::size_t id) const {
  return nodes_[id].grad;
}

std::vector<double>* Tape::grad_target(std::size_t id) {
  Node& n = nodes_[id];
  if (!n.requires_grad) return nullptr;
  n.touched = true;
  return &n.grad;
}

// Appends the output node of an op. backprop receives the tape and the
// node's own id and must add into the parents' grad buffers (marking
// them touched).
Tensor op_result(Tape& tape, std::vector<std::size_t> shape,
                 std::vector<double> values, bool requires_grad,
                 std::function<void(Tape&, std::size_t)> backprop,
                 const char* op_name) {
  check_finite(values, op_name);
  Tape::Node n;
  n.shape = std::move(shape);
  n.values = std::move(values);
  n.requires_grad = requires_grad;
  if (requires_grad) {
    n.grad.assign(n.values.size(), 0.0);
    n.backprop = std::move(backprop);
  }
  tape.nodes_.push_back(std::move(n));
  return Tensor(&tape, tape.nodes_.size() - 1);
}

namespace {

Tensor elementwise_binary(const Tensor& a, const Tensor& b, const char* name,
                          double (*fwd)(double, double),
                          void (*bwd)(double va, double vb, double g,
                                      double* ga, double* gb)) {
  require_same_tape(a, b, name);
  require_same_shape(a, b, name);
  const auto& av = a.values();
  const auto& bv = b.values();
  std::vector<double> out(av.size());
  for (std::size_t i = 0; i < av.size(); ++i) out[i] = fwd(av[i], bv[i]);
  const bool rg = a.requires_grad() || b.requires_grad();
  const std::size_t aid = a.id(), bid = b.id();
  return op_result(
      *a.tape(), a.shape(), std::move(out), rg,
      [aid, bid, bwd](Tape& tape, std::size_t self) {
        const auto& g = tape.grad_of(self);
        const auto& av2 = tape.values_of(aid);
        const auto& bv2 = tape.values_of(bid);
        auto* ga = tape.grad_target(aid);
        auto* gb = tape.grad_target(bid);
        for (std::size_t i = 0; i < g.size(); ++i) {
          double da = 0.0, db = 0.0;
          bwd(av2[i], bv2[i], g[i], &da, &db);
          if (ga) (*ga)[i] += da;
          if (gb) (*gb)[i] += db;
        }
      },
      name);
}

}  // namespace

Tensor add(const Tensor& a, const Tensor& b) {
  return elementwise_binary(
      a, b, "add", [](double x, double y) { return x + y; },
      [](double, double, double g, double* ga, double* gb) {
        *ga = g;
        *gb = g;
      });
}

Tensor sub(const Tensor& a, const Tensor& b) {
  return elementwise_binary(
      a, b, "sub", [](double x, double y) { return x - y; },
      [](double, double, double g, double* ga, double* gb) {
        *ga = g;
        *gb = -g;
      });
}

Tensor mul(const Tensor& a, const Tensor& b) {
  return elementwise_binary(
      a, b, "mul", [](double x, double y) { return x * y; },
      [](double x, double y, double g, double* ga, double* gb) {
        *ga = g * y;
        *gb = g * x;
      });
}

namespace {

Tensor elementwise_unary(const Tensor& a, const char* name,
                         const std::function<double(double)>& fwd,
                         const std::function<double(double, double)>& dvdx) {
  const auto& av = a.values();
  std::vector<double> out(av.size());
  for (std::size_t i = 0; i < av.size(); ++i) out[i] = fwd(av[i]);
  const std::size_t aid = a.id();
  return op_result(
      *a.tape(), a.shape(), std::move(out), a.requires_grad(),
      [aid, dvdx](Tape& tape, std::size_t self) {
        const auto& g = tape.grad_of(self);
        const auto& av2 = tape.values_of(aid);
        if (auto* ga = tape.grad_target(aid)) {
          for (std::size_t i = 0; i < g.size(); ++i) {
            (*ga)[i] += g[i] * dvdx(av2[i], g[i]);
          }
        }
      },
      name);
}

}  // namespace

Tensor scale(const Tensor& a, double k) {
  return elementwise_unary(
      a, "scale", [k](double x) { return x * k; },
      [k](double, double) { return k; });
}

Tensor add_scalar(const Tensor& a, double k) {
  return elementwise_unary(
      a, "add_scalar", [k](double x) { return x + k; },
      [](double, double) { return 1.0; });
}

Tensor abs(const Tensor& a) {
  return elementwise_unary(
      a, "abs", [](double x) { return std::abs(x); },
      [](double x, double) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); });
}

Tensor relu(const Tensor& a) {
  return elementwise_unary(
      a, "relu", [](double x) { return x > 0.0 ? x : 0.0; },
      [](double x, double) { return x > 0.0 ? 1.0 : 0.0; });
}

Tensor matmul(const Tensor& a, const Tensor& b) {
  require_same_tape(a, b, "matmul");
  if (a.shape().size() != 2 || b.shape().size() != 2 ||
      a.shape()[1] != b.shape()[0]) {
    throw UsageError("matmul: incompatible shapes " + shape_str(a.shape()) +
                     " and " + shape_str(b.shape()));
  }
  const std::size_t m = a.shape()[0], k = a.shape()[1], n = b.shape()[1];
  const auto& av = a.values();
  const auto& bv = b.values();
  std::vector<double> out(m * n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const double* arow = av.data() + i * k;
    double* orow = out.data() + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const double apv = arow[p];
      if (apv == 0.0) continue;
      const double* brow = bv.data() + p * n;
      for (std::size_t j = 0; j < n; ++j) orow[j] += apv * brow[j];
    }
  }
  const bool rg = a.requires_grad() || b.requires_grad();
  const std::size_t aid = a.id(), bid = b.id();
  return op_result(
      *a.tape(), {m, n}, std::move(out), rg,
      [aid, bid, m, k, n](Tape& tape, std::size_t self) {
        const auto& g = tape.grad_of(self);
        const auto& av2 = tape.values_of(aid);
        const auto& bv2 = tape.values_of(bid);
        if (auto* ga = tape.grad_target(aid)) {
          // dA = g . B^T
          for (std::size_t i = 0; i < m; ++i) {
            const double* grow = g.data() + i * n;
            double* garow = ga->data() + i * k;
            for (std::size_t p = 0; p < k; ++p) {
              const double* brow = bv2.data() + p * n;
              double s = 0.0;
              for (std::size_t j = 0; j < n; ++j) s += grow[j] * brow[j];
              garow[p] += s;
            }
          }
        }
        if (auto* gb = tape.grad_target(bid)) {
          // dB = A^T . g
          for (std::size_t i = 0; i < m; ++i) {
            const double* arow = av2.data() + i * k;
            const double* grow = g.data() + i * n;
            for (std::size_t p = 0; p < k; ++p) {
              const double apv = arow[p];
              if (apv == 0.0) continue;
              double* gbrow = gb->data() + p * n;
              for (std::size_t j = 0; j < n; ++j) gbrow[j] += apv * grow[j];
            }
          }
        }
      },
      "matmul");
}

Tensor add_bias(const Tensor& a, const Tensor& bias) {
  require_same_tape(a, bias, "add_bias");
  if (a.shape().size() != 2 || bias.shape().size() != 1 ||
      bias.shape()[0] != a.shape()[1]) {
    throw UsageError("add_bias: shapes " + shape_str(a.shape()) + " and " +
                     shape_str(bias.shape()) + " are incompatible");
  }
  const std::size_t m = a.shape()[0], n = a.shape()[1];
  const auto& av = a.values();
  const auto& bv = bias.values();
  std::vector<double> out(m * n);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) out[i * n + j] = av[i * n + j] + bv[j];
  }
  const bool rg = a.requires_grad() || bias.requires_grad();
  const std::size_t aid = a.id(), bid = bias.id();
  return op_result(
      *a.tape(), {m, n}, std::move(out), rg,
      [aid, bid, m, n](Tape& tape, std::size_t self) {
        const auto& g = tape.grad_of(self);
        if (auto* ga = tape.grad_target(aid)) {
          for (std::size_t i = 0; i < g.size(); ++i) (*ga)[i] += g[i];
        }
        if (auto* gb = tape.grad_target(bid)) {
          for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < n; ++j) (*gb)[j] += g[i * n + j];
          }
        }
      },
      "add_bias");
}

Tensor concat_cols(const Tensor& a, const Tensor& b) {
  require_same_tape(a, b, "concat_cols");
  if (a.shape().size() != 2 || b.shape().size() != 2 ||
      a.shape()[0] != b.shape()[0]) {
    throw UsageError("concat_cols: shapes " + shape_str(a.shape()) + " and " +
                     shape_str(b.shape()) + " do not share a row count");
  }
  const std::size_t m = a.shape()[0], p = a.shape()[1], q = b.shape()[1];
  const auto& av = a.values();
  const auto& bv = b.values();
  std::vector<double> out(m * (p + q));
  for (std::size_t i = 0; i < m; ++i) {
    std::copy_n(av.data() + i * p, p, out.data() + i * (p + q));
    std::copy_n(bv.data() + i * q, q, out.data() + i * (p + q) + p);
  }
  const bool rg = a.requires_grad() || b.requires_grad();
  const std::size_t aid = a.id(), bid = b.id();
  return op_result(
      *a.tape(), {m, p + q}, std::move(out), rg,
      [aid, bid, m, p, q](Tape& tape, std::size_t self) {
        const auto& g = tape.grad_of(self);
        if (auto* ga = tape.grad_target(aid)) {
          for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < p; ++j) {
              (*ga)[i * p + j] += g[i * (p + q) + j];
            }
          }
        }
        if (auto* gb = tape.grad_target(bid)) {
          for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < q; ++j) {
              (*gb)[i * q + j] += g[i * (p + q) + p + j];
            }
          }
        }
      },
      "concat_cols");
}

Tensor broadcast_row(const Tensor& v, std::size_t m) {
  if (v.shape().size() != 2 || v.shape()[0] != 1 || m == 0) {
    throw UsageError("broadcast_row: need a [1xn] input and m >= 1, got " +
                     shape_str(v.shape()) + " and m=" + std::to_string(m));
  }
  const std::size_t n = v.shape()[1];
  const auto& vv = v.values();
  std::vector<double> out(m * n);
  for (std::size_t i = 0; i < m; ++i) {
    std::copy_n(vv.data(), n, out.data() + i * n);
  }
  const std::size_t vid = v.id();
  return op_result(
      *v.tape(), {m, n}, std::move(out), v.requires_grad(),
      [vid, m, n](Tape& tape, std::size_t self) {
        const auto& g = tape.grad_of(self);
        if (auto* gv = tape.grad_target(vid)) {
          for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < n; ++j) (*gv)[j] += g[i * n + j];
          }
        }
      },
      "broadcast_row");
}

Tensor maxpool_cols(const Tensor& a) {
  if (a.shape().size() != 2 || a.shape()[0] == 0) {
    throw UsageError("maxpool_cols: need a non-empty [Nxd] input, got " +
                     shape_str(a.shape()));
  }
  const std::size_t m = a.shape()[0], n = a.shape()[1];
  const auto& av = a.values();
  std::vector<double> out(n);
  std::vector<std::size_t> argmax(n, 0);
  for (std::size_t j = 0; j < n; ++j) {
    double best = av[j];
    std::size_t best_row = 0;
    for (std::size_t i = 1; i < m; ++i) {
      const double v = av[i * n + j];
      if (v > best) {  // strict: ties keep the lowest row
        best = v;
        best_row = i;
      }
    }
    out[j] = best;
    argmax[j] = best_row;
  }
  const std::size_t aid = a.id();
  return op_result(
      *a.tape(), {1, n}, std::move(out), a.requires_grad(),
      [aid, n, argmax = std::move(argmax)](Tape& tape, std::size_t self) {
        const auto& g = tape.grad_of(self);
        if (auto* ga = tape.grad_target(aid)) {
          for (std::size_t j = 0; j < n; ++j) {
            (*ga)[argmax[j] * n + j] += g[j];
          }
        }
      },
      "maxpool_cols");
}

namespace {

Tensor reduce_all(const Tensor& a, const char* name, double denom) {
  const auto& av = a.values();
  double total = 0.0;
  for (double v : av) total += v;
  total /= denom;
  const std::size_t aid = a.id();
  return op_result(
      *a.tape(), {}, {total}, a.requires_grad(),
      [aid, denom](Tape& tape, std::size_t self) {
        const double g = tape.grad_of(self)[0] / denom;
        if (auto* ga = tape.grad_target(aid)) {
          for (double& x : *ga) x += g;
        }
      },
      name);
}

}  // namespace

Tensor sum_all(const Tensor& a) { return reduce_all(a, "sum_all", 1.0); }

Tensor mean_all(const Tensor& a) {
  if (a.numel() == 0) throw UsageError("mean_all: empty tensor");
  return reduce_all(a, "mean_all", static_cast<double>(a.numel()));
}

Tensor cosine_sim_rows(const Tensor& a, const Tensor& b) {
  require_same_tape(a, b, "cosine_sim_rows");
  require_same_shape(a, b, "cosine_sim_rows");
  if (a.shape().size() != 2) {
    throw UsageError("cosine_sim_rows: need [Nxd] inputs, got " +
                     shape_str(a.shape()));
  }
  const std::size_t m = a.shape()[0], n = a.shape()[1];
  const auto& av = a.values();
  const auto& bv = b.values();
  std::vector<double> out(m);
  for (std::size_t i = 0; i < m; ++i) {
    double aa = 0.0, bb = 0.0, ab = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double x = av[i * n + j], y = bv[i * n + j];
      aa += x * x;
      bb += y * y;
      ab += x * y;
    }
    const double na = std::sqrt(aa), nb = std::sqrt(bb);
    if (na <= 1e-12 || nb <= 1e-12) {
      throw UsageError("cosine_sim_rows: zero-norm row " + std::to_string(i));
    }
    out[i] = ab / (na * nb);
  }
  const bool rg = a.requires_grad() || b.requires_grad();
  const std::size_t aid = a.id(), bid = b.id();
  return op_result(
      *a.tape(), {m}, std::move(out), rg,
      [aid, bid, m, n](Tape& tape, std::size_t self) {
        const auto& g = tape.grad_of(self);
        const auto& av2 = tape.values_of(aid);
        const auto& bv2 = tape.values_of(bid);
        auto* ga = tape.grad_target(aid);
        auto* gb = tape.grad_target(bid);
        for (std::size_t i = 0; i < m; ++i) {
          double aa = 0.0, bb = 0.0, ab = 0.0;
          for (std::size_t j = 0; j < n; ++j) {
            const double x = av2[i * n + j], y = bv2[i * n + j];
            aa += x * x;
            bb += y * y;
            ab += x * y;
          }
          const double na = std::sqrt(aa), nb = std::sqrt(bb);
          const double inv = 1.0 / (na * nb);
          const double cosv = ab * inv;
          for (std::size_t j = 0; j < n; ++j) {
            const double x = av2[i * n + j], y = bv2[i * n + j];
            if (ga) (*ga)[i * n + j] += g[i] * (y * inv - cosv * x / aa);
            if (gb) (*gb)[i * n + j] += g[i] * (x * inv - cosv * y / bb);
          }
        }
      },
      "cosine_sim_rows");
}

Tensor project_rows(const Tensor& raw, const Tensor& points,
                    std::size_t* degenerate_count) {
  require_same_tape(raw, points, "project_rows");
  if (raw.shape().size() != 2 || raw.shape()[1] != 4 ||
      points.shape().size() != 2 || points.shape()[1] != 3 ||
      raw.shape()[0] != points.shape()[0]) {
    throw UsageError("project_rows: need [Nx4] planes and [Nx3] points, got " +
                     shape_str(raw.shape()) + " and " +
                     shape_str(points.shape()));
  }
  if (points.requires_grad()) {
    throw UsageError("project_rows: gradients w.r.t. points are unsupported");
  }
  const std::size_t m = raw.shape()[0];
  const auto& rv = raw.values();
  const auto& pv = points.values();
  std::vector<double> out(m * 3);
  std::vector<std::uint8_t> degenerate(m, 0);
  std::size_t ndeg = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double* r = rv.data() + i * 4;
    const double* p = pv.data() + i * 3;
    const double n2 = r[0] * r[0] + r[1] * r[1] + r[2] * r[2];
    if (std::sqrt(n2) <= 1e-8) {
      out[i * 3 + 0] = p[0];
      out[i * 3 + 1] = p[1];
      out[i * 3 + 2] = p[2];
      degenerate[i] = 1;
      ++ndeg;
      continue;
    }
    // out = p + ((c - a.p) / |a|^2) a, with (a, c) the raw row.
    const double t = (r[3] - (r[0] * p[0] + r[1] * p[1] + r[2] * p[2])) / n2;
    out[i * 3 + 0] = p[0] + t * r[0];
    out[i * 3 + 1] = p[1] + t * r[1];
    out[i * 3 + 2] = p[2] + t * r[2];
  }
  if (degenerate_count) *degenerate_count = ndeg;
  const std::size_t rid = raw.id(), pid = points.id();
  return op_result(
      *raw.tape(), {m, 3}, std::move(out), raw.requires_grad(),
      [rid, pid, m, degenerate = std::move(degenerate)](Tape& tape,
                                                        std::size_t self) {
        const auto& g = tape.grad_of(self);
        const auto& rv2 = tape.values_of(rid);
        const auto& pv2 = tape.values_of(pid);
        auto* gr = tape.grad_target(rid);
        if (!gr) return;
        for (std::size_t i = 0; i < m; ++i) {
          if (degenerate[i]) continue;
          const double* r = rv2.data() + i * 4;
          const double* p = pv2.data() + i * 3;
          const double* go = g.data() + i * 3;
          const double n2 = r[0] * r[0] + r[1] * r[1] + r[2] * r[2];
          const double t = (r[3] - (r[0] * p[0] + r[1] * p[1] + r[2] * p[2])) / n2;
          const double ga_dot = go[0] * r[0] + go[1] * r[1] + go[2] * r[2];
          // d(out)/dc = a / |a|^2
          (*gr)[i * 4 + 3] += ga_dot / n2;
          // d(out)/da = (-p (g.a) + t g) / |a|^2 - 2 t (g.a) a / |a|^4
          for (int j = 0; j < 3; ++j) {
            (*gr)[i * 4 + j] += (-p[j] * ga_dot + t * go[j]) / n2 -
                                2.0 * t * ga_dot * r[j] / (n2 * n2);
          }
        }
      },
      "project_rows");
}

double grad_check(
    const std::function<Tensor(Tape&, const std::vector<Tensor>&)>& f,
    const std::vector<LeafSpec>& xs, double h) {
  std::vector<std::vector<double>> analytic(xs.size());
  {
    Tape tape;
    std::vector<Tensor> leaves;
    leaves.reserve(xs.size());
    for (const LeafSpec& spec : xs) {
      leaves.push_back(tape.leaf(spec.shape, spec.values, true));
    }
    Tensor loss = f(tape, leaves);
    tape.backward(loss);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      analytic[i] = leaves[i].grad();
    }
  }

  const auto eval_at = [&](const std::vector<LeafSpec>& perturbed) {
    Tape tape;
    std::vector<Tensor> leaves;
    leaves.reserve(perturbed.size());
    for (const LeafSpec& spec : perturbed) {
      leaves.push_back(tape.leaf(spec.shape, spec.values, false));
    }
    return f(tape, leaves).scalar();
  };

  double max_rel = 0.0;
  std::vector<LeafSpec> work = xs;
  for (std::size_t t = 0; t < xs.size(); ++t) {
    for (std::size_t i = 0; i < xs[t].values.size(); ++i) {
      const double orig = work[t].values[i];
      work[t].values[i] = orig + h;
      const double fp = eval_at(work);
      work[t].values[i] = orig - h;
      const double fm = eval_at(work);
      work[t].values[i] = orig;
      const double fd = (fp - fm) / (2.0 * h);
      const double an = analytic[t][i];
      const double denom = std::max({std::abs(an), std::abs(fd), 1e-6});
      max_rel = std::max(max_rel, std::abs(an - fd) / denom);
    }
  }
  return max_rel;
}

}  // namespace npd::ad
