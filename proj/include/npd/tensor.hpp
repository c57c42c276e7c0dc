#pragma once

#include <cstddef>
#include <deque>
#include <functional>
#include <string>
#include <vector>

namespace npd::ad {

class Tape;

// Handle to a node on a tape. Values are immutable after creation; the
// gradient buffer is filled by Tape::backward.
class Tensor {
 public:
  Tensor() = default;

  const std::vector<std::size_t>& shape() const;
  std::size_t numel() const;
  std::size_t rows() const;  // shape[0], or 1 for scalars
  std::size_t cols() const;  // shape[1], or 1 below rank 2
  const std::vector<double>& values() const;
  const std::vector<double>& grad() const;
  bool requires_grad() const;
  double scalar() const;  // numel() == 1 only

  bool valid() const { return tape_ != nullptr; }
  Tape* tape() const { return tape_; }
  std::size_t id() const { return id_; }

 private:
  friend class Tape;
  friend Tensor op_result(Tape& tape, std::vector<std::size_t> shape,
                          std::vector<double> values, bool requires_grad,
                          std::function<void(Tape&, std::size_t)> backprop,
                          const char* op_name);
  Tensor(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}
  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

// Wengert list: every executed operation appends one node holding its
// output values and a closure that scatters the output gradient into its
// inputs. backward() replays the list in reverse, visiting each node
// exactly once.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Tensor leaf(std::vector<std::size_t> shape, std::vector<double> values,
              bool requires_grad);
  Tensor constant(std::vector<std::size_t> shape, std::vector<double> values);
  Tensor scalar_constant(double v);

  // Populates gradients of every node the loss depends on. The loss must
  // be a scalar; throws UsageError otherwise.
  void backward(const Tensor& loss);

  void zero_grad();
  std::size_t size() const { return nodes_.size(); }

  // Plumbing for op implementations (backprop closures).
  const std::vector<double>& values_of(std::size_t id) const;
  const std::vector<double>& grad_of(std::size_t id) const;
  // Grad buffer of a node, or nullptr when it tracks no gradient; marks
  // the node as reached by the current sweep.
  std::vector<double>* grad_target(std::size_t id);

 private:
  friend class Tensor;
  friend Tensor op_result(Tape& tape, std::vector<std::size_t> shape,
                          std::vector<double> values, bool requires_grad,
                          std::function<void(Tape&, std::size_t)> backprop,
                          const char* op_name);

  struct Node {
    std::vector<std::size_t> shape;
    std::vector<double> values;
    std::vector<double> grad;  // allocated only when requires_grad
    bool requires_grad = false;
    bool touched = false;  // received gradient during the current sweep
    std::function<void(Tape&, std::size_t)> backprop;
  };

  Node& node(std::size_t id) { return nodes_[id]; }
  const Node& node(std::size_t id) const { return nodes_[id]; }

  std::deque<Node> nodes_;
};

// Element-wise ops (equal shapes).
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, double k);
Tensor add_scalar(const Tensor& a, double k);
Tensor abs(const Tensor& a);
Tensor relu(const Tensor& a);

// [m,k] x [k,n] -> [m,n].
Tensor matmul(const Tensor& a, const Tensor& b);
// [m,n] + bias[n] broadcast over rows.
Tensor add_bias(const Tensor& a, const Tensor& bias);
// [m,p] | [m,q] -> [m,p+q].
Tensor concat_cols(const Tensor& a, const Tensor& b);
// [1,n] replicated to [m,n].
Tensor broadcast_row(const Tensor& v, std::size_t m);
// Column-wise max, [N,d] -> [1,d]. Gradient routes to the first row
// attaining each column maximum.
Tensor maxpool_cols(const Tensor& a);
// Reductions to a scalar (rank-0) tensor.
Tensor sum_all(const Tensor& a);
Tensor mean_all(const Tensor& a);
// Per-row cosine similarity of two [N,d] tensors -> [N]. Throws
// UsageError (naming the row) if any row norm is <= 1e-12.
Tensor cosine_sim_rows(const Tensor& a, const Tensor& b);

// Projects fixed points[N,3] onto the planes described by raw[N,4] rows
// (nx,ny,nz,c before normalization) -> [N,3]. Rows whose normal part is
// shorter than 1e-8 pass their point through unchanged with zero
// gradient; their count is written to degenerate_count when given.
Tensor project_rows(const Tensor& raw, const Tensor& points,
                    std::size_t* degenerate_count = nullptr);

// Finite-difference verification. Builds the scalar loss with f over
// leaves shaped/filled from xs, then compares analytic gradients against
// central differences at step h. Returns the max relative error.
struct LeafSpec {
  std::vector<std::size_t> shape;
  std::vector<double> values;
};
double grad_check(
    const std::function<Tensor(Tape&, const std::vector<Tensor>&)>& f,
    const std::vector<LeafSpec>& xs, double h = 1e-4);

}  // namespace npd::ad
