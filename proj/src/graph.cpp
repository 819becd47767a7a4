#include "stablerep/graph.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "stablerep/kernels.hpp"

namespace stablerep {

NodeId Graph::push(DenseMatrix value, bool needs_grad, std::function<void(Graph&)> back) {
    nodes_.push_back(Node{std::move(value), DenseMatrix(), std::move(back), needs_grad});
    return NodeId(nodes_.size() - 1);
}

NodeId Graph::leaf(DenseMatrix value, bool needs_grad) {
    return push(std::move(value), needs_grad, nullptr);
}

void Graph::accumulate(NodeId id, const DenseMatrix& g) {
    Node& n = nodes_[id];
    if (!n.needs_grad) return;
    kern::active().add(int(g.size()), n.grad.data.data(), g.data.data(), n.grad.data.data());
}

void Graph::accumulate_scaled(NodeId id, const DenseMatrix& g, double s) {
    Node& n = nodes_[id];
    if (!n.needs_grad) return;
    kern::active().axpy(int(g.size()), s, g.data.data(), n.grad.data.data());
}

const DenseMatrix& Graph::grad(NodeId id) const {
    const Node& n = nodes_[id];
    if (!n.needs_grad) throw ContractError("grad requested for a node without needs_grad");
    return n.grad;
}

NodeId Graph::matmul(NodeId a, NodeId b) {
    DenseMatrix v = stablerep::matmul(value(a), value(b));
    const bool ng = needs_grad(a) || needs_grad(b);
    NodeId out = push(std::move(v), ng, nullptr);
    if (ng)
        nodes_[out].back = [a, b, out](Graph& g) {
            const DenseMatrix& gc = g.nodes_[out].grad;
            if (g.needs_grad(a)) {
                kern::active().gemm_nt(gc.rows, g.value(b).rows, gc.cols, gc.data.data(),
                                       g.value(b).data.data(), g.nodes_[a].grad.data.data(), true);
            }
            if (g.needs_grad(b)) {
                kern::active().gemm_tn(g.value(a).cols, gc.cols, g.value(a).rows,
                                       g.value(a).data.data(), gc.data.data(),
                                       g.nodes_[b].grad.data.data(), true);
            }
        };
    return out;
}

NodeId Graph::matmul_nt(NodeId a, NodeId b) {
    DenseMatrix v = stablerep::matmul_nt(value(a), value(b));
    const bool ng = needs_grad(a) || needs_grad(b);
    NodeId out = push(std::move(v), ng, nullptr);
    if (ng)
        nodes_[out].back = [a, b, out](Graph& g) {
            const DenseMatrix& gc = g.nodes_[out].grad;  // m×n, C = A·Bᵀ
            if (g.needs_grad(a)) {
                kern::active().gemm_nn(gc.rows, g.value(b).cols, gc.cols, gc.data.data(),
                                       g.value(b).data.data(), g.nodes_[a].grad.data.data(), true);
            }
            if (g.needs_grad(b)) {
                kern::active().gemm_tn(gc.cols, g.value(a).cols, gc.rows, gc.data.data(),
                                       g.value(a).data.data(), g.nodes_[b].grad.data.data(), true);
            }
        };
    return out;
}

NodeId Graph::matmul_tn(NodeId a, NodeId b) {
    DenseMatrix v = stablerep::matmul_tn(value(a), value(b));
    const bool ng = needs_grad(a) || needs_grad(b);
    NodeId out = push(std::move(v), ng, nullptr);
    if (ng)
        nodes_[out].back = [a, b, out](Graph& g) {
            const DenseMatrix& gc = g.nodes_[out].grad;  // m×n, C = Aᵀ·B, A k×m, B k×n
            if (g.needs_grad(a)) {
                kern::active().gemm_nt(g.value(b).rows, gc.rows, gc.cols, g.value(b).data.data(),
                                       gc.data.data(), g.nodes_[a].grad.data.data(), true);
            }
            if (g.needs_grad(b)) {
                kern::active().gemm_nn(g.value(a).rows, gc.cols, g.value(a).cols,
                                       g.value(a).data.data(), gc.data.data(),
                                       g.nodes_[b].grad.data.data(), true);
            }
        };
    return out;
}

NodeId Graph::add(NodeId a, NodeId b) {
    if (!value(a).same_shape(value(b))) throw ShapeError("add: shape mismatch");
    DenseMatrix v(value(a).rows, value(a).cols);
    kern::active().add(int(v.size()), value(a).data.data(), value(b).data.data(), v.data.data());
    const bool ng = needs_grad(a) || needs_grad(b);
    NodeId out = push(std::move(v), ng, nullptr);
    if (ng)
        nodes_[out].back = [a, b, out](Graph& g) {
            g.accumulate(a, g.nodes_[out].grad);
            g.accumulate(b, g.nodes_[out].grad);
        };
    return out;
}

NodeId Graph::sub(NodeId a, NodeId b) {
    if (!value(a).same_shape(value(b))) throw ShapeError("sub: shape mismatch");
    DenseMatrix v(value(a).rows, value(a).cols);
    kern::active().sub(int(v.size()), value(a).data.data(), value(b).data.data(), v.data.data());
    const bool ng = needs_grad(a) || needs_grad(b);
    NodeId out = push(std::move(v), ng, nullptr);
    if (ng)
        nodes_[out].back = [a, b, out](Graph& g) {
            g.accumulate(a, g.nodes_[out].grad);
            g.accumulate_scaled(b, g.nodes_[out].grad, -1.0);
        };
    return out;
}

NodeId Graph::hadamard(NodeId a, NodeId b) {
    if (!value(a).same_shape(value(b))) throw ShapeError("hadamard: shape mismatch");
    DenseMatrix v(value(a).rows, value(a).cols);
    kern::active().hadamard(int(v.size()), value(a).data.data(), value(b).data.data(), v.data.data());
    const bool ng = needs_grad(a) || needs_grad(b);
    NodeId out = push(std::move(v), ng, nullptr);
    if (ng)
        nodes_[out].back = [a, b, out](Graph& g) {
            const DenseMatrix& gc = g.nodes_[out].grad;
            DenseMatrix tmp(gc.rows, gc.cols);
            if (g.needs_grad(a)) {
                kern::active().hadamard(int(gc.size()), gc.data.data(), g.value(b).data.data(),
                                        tmp.data.data());
                g.accumulate(a, tmp);
            }
            if (g.needs_grad(b)) {
                kern::active().hadamard(int(gc.size()), gc.data.data(), g.value(a).data.data(),
                                        tmp.data.data());
                g.accumulate(b, tmp);
            }
        };
    return out;
}

NodeId Graph::scale(NodeId a, double s) {
    DenseMatrix v = value(a);
    kern::active().scale(int(v.size()), s, v.data.data());
    const bool ng = needs_grad(a);
    NodeId out = push(std::move(v), ng, nullptr);
    if (ng)
        nodes_[out].back = [a, s, out](Graph& g) {
            g.accumulate_scaled(a, g.nodes_[out].grad, s);
        };
    return out;
}

NodeId Graph::add_row(NodeId a, NodeId bias) {
    const DenseMatrix& x = value(a);
    const DenseMatrix& b = value(bias);
    if (b.rows != 1 || b.cols != x.cols) throw ShapeError("add_row: bias must be 1×cols");
    DenseMatrix v = x;
    for (int r = 0; r < v.rows; ++r)
        kern::active().add(v.cols, v.row(r), b.row(0), v.row(r));
    const bool ng = needs_grad(a) || needs_grad(bias);
    NodeId out = push(std::move(v), ng, nullptr);
    if (ng)
        nodes_[out].back = [a, bias, out](Graph& g) {
            const DenseMatrix& gc = g.nodes_[out].grad;
            g.accumulate(a, gc);
            if (g.needs_grad(bias)) {
                DenseMatrix colsum(1, gc.cols);
                for (int r = 0; r < gc.rows; ++r)
                    kern::active().add(gc.cols, colsum.row(0), gc.row(r), colsum.row(0));
                g.accumulate(bias, colsum);
            }
        };
    return out;
}

NodeId Graph::leaky_relu(NodeId a, double slope) {
    DenseMatrix v = value(a);
    for (double& x : v.data)
        if (x < 0.0) x *= slope;
    const bool ng = needs_grad(a);
    NodeId out = push(std::move(v), ng, nullptr);
    if (ng)
        nodes_[out].back = [a, slope, out](Graph& g) {
            const DenseMatrix& gc = g.nodes_[out].grad;
            const DenseMatrix& x = g.value(a);
            DenseMatrix tmp(gc.rows, gc.cols);
            for (size_t i = 0; i < gc.size(); ++i)
                tmp.data[i] = x.data[i] < 0.0 ? gc.data[i] * slope : gc.data[i];
            g.accumulate(a, tmp);
        };
    return out;
}

NodeId Graph::row_normalize(NodeId a) {
    const DenseMatrix& x = value(a);
    DenseMatrix v(x.rows, x.cols);
    std::vector<double> norms(x.rows);
    for (int r = 0; r < x.rows; ++r) {
        const double nrm = std::sqrt(kern::active().sumsq(x.cols, x.row(r)));
        if (nrm < 1e-150) throw NumericError("row_normalize: zero row " + std::to_string(r));
        norms[r] = nrm;
        for (int c = 0; c < x.cols; ++c) v(r, c) = x(r, c) / nrm;
    }
    const bool ng = needs_grad(a);
    NodeId out = push(std::move(v), ng, nullptr);
    if (ng)
        nodes_[out].back = [a, out, norms = std::move(norms)](Graph& g) {
            const DenseMatrix& gc = g.nodes_[out].grad;
            const DenseMatrix& y = g.value(out);
            DenseMatrix tmp(gc.rows, gc.cols);
            for (int r = 0; r < gc.rows; ++r) {
                const double proj = kern::active().dot(gc.cols, y.row(r), gc.row(r));
                for (int c = 0; c < gc.cols; ++c)
                    tmp(r, c) = (gc(r, c) - y(r, c) * proj) / norms[r];
            }
            g.accumulate(a, tmp);
        };
    return out;
}

NodeId Graph::set_diag(NodeId a, double dv) {
    const DenseMatrix& x = value(a);
    if (x.rows != x.cols) throw ShapeError("set_diag: matrix must be square");
    DenseMatrix v = x;
    for (int i = 0; i < v.rows; ++i) v(i, i) = dv;
    const bool ng = needs_grad(a);
    NodeId out = push(std::move(v), ng, nullptr);
    if (ng)
        nodes_[out].back = [a, out](Graph& g) {
            DenseMatrix tmp = g.nodes_[out].grad;
            for (int i = 0; i < tmp.rows; ++i) tmp(i, i) = 0.0;  // diagonal was overwritten
            g.accumulate(a, tmp);
        };
    return out;
}

NodeId Graph::logsumexp_rows(NodeId a) {
    const DenseMatrix& x = value(a);
    DenseMatrix v(x.rows, 1);
    for (int r = 0; r < x.rows; ++r) {
        double mx = x(r, 0);
        for (int c = 1; c < x.cols; ++c) mx = std::max(mx, x(r, c));
        double s = 0.0;
        for (int c = 0; c < x.cols; ++c) s += std::exp(x(r, c) - mx);
        v(r, 0) = std::log(s) + mx;
    }
    const bool ng = needs_grad(a);
    NodeId out = push(std::move(v), ng, nullptr);
    if (ng)
        nodes_[out].back = [a, out](Graph& g) {
            const DenseMatrix& gc = g.nodes_[out].grad;
            const DenseMatrix& x = g.value(a);
            const DenseMatrix& lse = g.value(out);
            DenseMatrix tmp(x.rows, x.cols);
            for (int r = 0; r < x.rows; ++r)
                for (int c = 0; c < x.cols; ++c)
                    tmp(r, c) = std::exp(x(r, c) - lse(r, 0)) * gc(r, 0);
            g.accumulate(a, tmp);
        };
    return out;
}

NodeId Graph::gather_cols(NodeId a, std::vector<int> idx) {
    const DenseMatrix& x = value(a);
    if (int(idx.size()) != x.rows) throw ShapeError("gather_cols: one index per row required");
    DenseMatrix v(x.rows, 1);
    for (int r = 0; r < x.rows; ++r) {
        if (idx[r] < 0 || idx[r] >= x.cols) throw ShapeError("gather_cols: index out of range");
        v(r, 0) = x(r, idx[r]);
    }
    const bool ng = needs_grad(a);
    NodeId out = push(std::move(v), ng, nullptr);
    if (ng)
        nodes_[out].back = [a, out, idx = std::move(idx)](Graph& g) {
            const DenseMatrix& gc = g.nodes_[out].grad;
            DenseMatrix tmp(g.value(a).rows, g.value(a).cols);
            for (int r = 0; r < tmp.rows; ++r) tmp(r, idx[r]) = gc(r, 0);
            g.accumulate(a, tmp);
        };
    return out;
}

NodeId Graph::rowwise_dot(NodeId a, NodeId b) {
    if (!value(a).same_shape(value(b))) throw ShapeError("rowwise_dot: shape mismatch");
    const DenseMatrix& x = value(a);
    const DenseMatrix& y = value(b);
    DenseMatrix v(x.rows, 1);
    for (int r = 0; r < x.rows; ++r) v(r, 0) = kern::active().dot(x.cols, x.row(r), y.row(r));
    const bool ng = needs_grad(a) || needs_grad(b);
    NodeId out = push(std::move(v), ng, nullptr);
    if (ng)
        nodes_[out].back = [a, b, out](Graph& g) {
            const DenseMatrix& gc = g.nodes_[out].grad;
            const DenseMatrix& x = g.value(a);
            const DenseMatrix& y = g.value(b);
            DenseMatrix tmp(x.rows, x.cols);
            if (g.needs_grad(a)) {
                for (int r = 0; r < x.rows; ++r)
                    for (int c = 0; c < x.cols; ++c) tmp(r, c) = gc(r, 0) * y(r, c);
                g.accumulate(a, tmp);
            }
            if (g.needs_grad(b)) {
                for (int r = 0; r < x.rows; ++r)
                    for (int c = 0; c < x.cols; ++c) tmp(r, c) = gc(r, 0) * x(r, c);
                g.accumulate(b, tmp);
            }
        };
    return out;
}

NodeId Graph::concat_cols(NodeId a, NodeId b) {
    const DenseMatrix& x = value(a);
    const DenseMatrix& y = value(b);
    if (x.rows != y.rows) throw ShapeError("concat_cols: row count mismatch");
    DenseMatrix v(x.rows, x.cols + y.cols);
    for (int r = 0; r < x.rows; ++r) {
        for (int c = 0; c < x.cols; ++c) v(r, c) = x(r, c);
        for (int c = 0; c < y.cols; ++c) v(r, x.cols + c) = y(r, c);
    }
    const bool ng = needs_grad(a) || needs_grad(b);
    NodeId out = push(std::move(v), ng, nullptr);
    if (ng)
        nodes_[out].back = [a, b, out](Graph& g) {
            const DenseMatrix& gc = g.nodes_[out].grad;
            const int ca = g.value(a).cols, cb = g.value(b).cols;
            if (g.needs_grad(a)) {
                DenseMatrix ta(gc.rows, ca);
                for (int r = 0; r < gc.rows; ++r)
                    for (int c = 0; c < ca; ++c) ta(r, c) = gc(r, c);
                g.accumulate(a, ta);
            }
            if (g.needs_grad(b)) {
                DenseMatrix tb(gc.rows, cb);
                for (int r = 0; r < gc.rows; ++r)
                    for (int c = 0; c < cb; ++c) tb(r, c) = gc(r, ca + c);
                g.accumulate(b, tb);
            }
        };
    return out;
}

NodeId Graph::diag_part(NodeId a) {
    const DenseMatrix& x = value(a);
    if (x.rows != x.cols) throw ShapeError("diag_part: matrix must be square");
    DenseMatrix v(x.rows, 1);
    for (int i = 0; i < x.rows; ++i) v(i, 0) = x(i, i);
    const bool ng = needs_grad(a);
    NodeId out = push(std::move(v), ng, nullptr);
    if (ng)
        nodes_[out].back = [a, out](Graph& g) {
            const DenseMatrix& gc = g.nodes_[out].grad;
            DenseMatrix tmp(gc.rows, gc.rows);
            for (int i = 0; i < gc.rows; ++i) tmp(i, i) = gc(i, 0);
            g.accumulate(a, tmp);
        };
    return out;
}

NodeId Graph::col_standardize(NodeId a) {
    const DenseMatrix& x = value(a);
    if (x.rows < 2) throw ContractError("col_standardize: need at least 2 rows");
    const int n = x.rows, c = x.cols;
    std::vector<double> sigma(c);
    DenseMatrix v(n, c);
    for (int j = 0; j < c; ++j) {
        double mu = 0.0;
        for (int i = 0; i < n; ++i) mu += x(i, j);
        mu /= n;
        double var = 0.0;
        for (int i = 0; i < n; ++i) var += (x(i, j) - mu) * (x(i, j) - mu);
        var /= n;
        const double sd = std::sqrt(var);
        if (sd <= 1e-8) throw NumericError("degenerate batch: zero-variance column " + std::to_string(j));
        sigma[j] = sd;
        for (int i = 0; i < n; ++i) v(i, j) = (x(i, j) - mu) / sd;
    }
    const bool ng = needs_grad(a);
    NodeId out = push(std::move(v), ng, nullptr);
    if (ng)
        nodes_[out].back = [a, out, sigma = std::move(sigma)](Graph& g) {
            const DenseMatrix& gc = g.nodes_[out].grad;
            const DenseMatrix& y = g.value(out);
            const int n = gc.rows, c = gc.cols;
            DenseMatrix tmp(n, c);
            for (int j = 0; j < c; ++j) {
                double mg = 0.0, mgy = 0.0;
                for (int i = 0; i < n; ++i) {
                    mg += gc(i, j);
                    mgy += gc(i, j) * y(i, j);
                }
                mg /= n;
                mgy /= n;
                for (int i = 0; i < n; ++i)
                    tmp(i, j) = (gc(i, j) - mg - y(i, j) * mgy) / sigma[j];
            }
            g.accumulate(a, tmp);
        };
    return out;
}

NodeId Graph::softmax_xent(NodeId logits, std::vector<int> labels) {
    const DenseMatrix& x = value(logits);
    if (int(labels.size()) != x.rows) throw ShapeError("softmax_xent: one label per row required");
    for (int y : labels)
        if (y < 0 || y >= x.cols) throw ContractError("softmax_xent: label out of range");
    DenseMatrix v(1, 1);
    std::vector<double> lse(x.rows);
    double total = 0.0;
    for (int r = 0; r < x.rows; ++r) {
        double mx = x(r, 0);
        for (int c = 1; c < x.cols; ++c) mx = std::max(mx, x(r, c));
        double s = 0.0;
        for (int c = 0; c < x.cols; ++c) s += std::exp(x(r, c) - mx);
        lse[r] = std::log(s) + mx;
        total += lse[r] - x(r, labels[r]);
    }
    v(0, 0) = total / x.rows;
    const bool ng = needs_grad(logits);
    NodeId out = push(std::move(v), ng, nullptr);
    if (ng)
        nodes_[out].back = [logits, out, labels = std::move(labels), lse = std::move(lse)](Graph& g) {
            const double go = g.nodes_[out].grad(0, 0);
            const DenseMatrix& x = g.value(logits);
            DenseMatrix tmp(x.rows, x.cols);
            const double inv_n = 1.0 / x.rows;
            for (int r = 0; r < x.rows; ++r) {
                for (int c = 0; c < x.cols; ++c) {
                    double p = std::exp(x(r, c) - lse[r]);
                    if (c == labels[r]) p -= 1.0;
                    tmp(r, c) = p * inv_n * go;
                }
            }
            g.accumulate(logits, tmp);
        };
    return out;
}

NodeId Graph::sum_all(NodeId a) {
    DenseMatrix v(1, 1);
    v(0, 0) = kern::active().sum(int(value(a).size()), value(a).data.data());
    const bool ng = needs_grad(a);
    NodeId out = push(std::move(v), ng, nullptr);
    if (ng)
        nodes_[out].back = [a, out](Graph& g) {
            const double go = g.nodes_[out].grad(0, 0);
            DenseMatrix tmp(g.value(a).rows, g.value(a).cols, go);
            g.accumulate(a, tmp);
        };
    return out;
}

NodeId Graph::mean_all(NodeId a) {
    return scale(sum_all(a), 1.0 / double(value(a).size()));
}

NodeId Graph::square(NodeId a) {
    DenseMatrix v(value(a).rows, value(a).cols);
    kern::active().hadamard(int(v.size()), value(a).data.data(), value(a).data.data(), v.data.data());
    const bool ng = needs_grad(a);
    NodeId out = push(std::move(v), ng, nullptr);
    if (ng)
        nodes_[out].back = [a, out](Graph& g) {
            const DenseMatrix& gc = g.nodes_[out].grad;
            DenseMatrix tmp(gc.rows, gc.cols);
            kern::active().hadamard(int(gc.size()), gc.data.data(), g.value(a).data.data(),
                                    tmp.data.data());
            g.accumulate(a, tmp);
        };
    return out;
}

void Graph::backward(NodeId loss) {
    const DenseMatrix& lv = value(loss);
    if (lv.rows != 1 || lv.cols != 1) throw ContractError("backward: loss must be scalar");
    for (Node& n : nodes_) {
        if (n.needs_grad)
            n.grad = DenseMatrix(n.value.rows, n.value.cols);
        else
            n.grad = DenseMatrix();
    }
    if (!nodes_[loss].needs_grad)
        throw ContractError("backward: loss does not depend on any differentiable leaf");
    nodes_[loss].grad(0, 0) = 1.0;
    for (NodeId id = loss; id >= 0; --id) {
        Node& n = nodes_[id];
        if (n.needs_grad && n.back) n.back(*this);
    }
}

}  // namespace stablerep
