#pragma once

#include <functional>
#include <vector>

#include "stablerep/matrix.hpp"

namespace stablerep {

using NodeId = int;

// Reverse-mode differentiation tape over DenseMatrix nodes. Nodes are
// appended in topological order by construction; backward() walks them once
// in reverse, accumulating into .grad without touching .value. A graph is
// built per training step and discarded.
class Graph {
  public:
    NodeId leaf(DenseMatrix value, bool needs_grad = false);

    NodeId matmul(NodeId a, NodeId b);     // A·B
    NodeId matmul_nt(NodeId a, NodeId b);  // A·Bᵀ
    NodeId matmul_tn(NodeId a, NodeId b);  // Aᵀ·B
    NodeId add(NodeId a, NodeId b);
    NodeId sub(NodeId a, NodeId b);
    NodeId hadamard(NodeId a, NodeId b);
    NodeId scale(NodeId a, double s);
    NodeId add_row(NodeId a, NodeId bias);  // bias 1×n broadcast over rows
    NodeId leaky_relu(NodeId a, double slope);
    NodeId row_normalize(NodeId a);
    NodeId set_diag(NodeId a, double v);     // overwrite diagonal of a square matrix
    NodeId logsumexp_rows(NodeId a);         // m×n -> m×1
    NodeId gather_cols(NodeId a, std::vector<int> idx);  // picks a(i, idx[i]) -> m×1
    NodeId rowwise_dot(NodeId a, NodeId b);  // m×1
    NodeId concat_cols(NodeId a, NodeId b);
    NodeId diag_part(NodeId a);              // n×n -> n×1
    // Per-column batch standardization (zero mean, unit std, biased variance).
    NodeId col_standardize(NodeId a);
    // Mean multinomial cross-entropy of row-softmax(logits) against labels.
    NodeId softmax_xent(NodeId logits, std::vector<int> labels);
    NodeId sum_all(NodeId a);   // 1×1
    NodeId mean_all(NodeId a);  // 1×1
    NodeId square(NodeId a);

    // Reverse pass from a scalar loss; values are left untouched.
    void backward(NodeId loss);

    const DenseMatrix& value(NodeId id) const { return nodes_[id].value; }
    const DenseMatrix& grad(NodeId id) const;
    bool needs_grad(NodeId id) const { return nodes_[id].needs_grad; }
    size_t num_nodes() const { return nodes_.size(); }

  private:
    struct Node {
        DenseMatrix value;
        DenseMatrix grad;
        std::function<void(Graph&)> back;
        bool needs_grad = false;
    };

    NodeId push(DenseMatrix value, bool needs_grad, std::function<void(Graph&)> back);
    void accumulate(NodeId id, const DenseMatrix& g);
    void accumulate_scaled(NodeId id, const DenseMatrix& g, double s);

    std::vector<Node> nodes_;
};

}  // namespace stablerep
