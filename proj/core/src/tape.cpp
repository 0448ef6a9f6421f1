#include "edgewise/tape.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "edgewise/errors.hpp"

namespace edgewise {

namespace {

void require_same_shape(const Dense& a, const Dense& b, const char* op) {
  if (!a.same_shape(b)) {
    throw ContractError(std::string(op) + ": shape mismatch");
  }
}

}  // namespace

Var Tape::push(Dense value, std::function<void(Tape&, std::size_t)> backprop) {
  nodes_.push_back(Node{std::move(value), std::move(backprop)});
  grads_.emplace_back();
  grad_present_.push_back(0);
  return Var{nodes_.size() - 1};
}

Dense& Tape::grad_buffer(std::size_t id) {
  if (!grad_present_[id]) {
    const Dense& v = nodes_[id].value;
    grads_[id] = Dense::zeros(v.rows(), v.cols());
    grad_present_[id] = 1;
  }
  return grads_[id];
}

Var Tape::input(Dense value) { return push(std::move(value), nullptr); }

Var Tape::matmul(Var a, Var b) {
  const Dense& va = node_value(a.id);
  const Dense& vb = node_value(b.id);
  if (va.cols() != vb.rows()) {
    throw ContractError("matmul: inner dimensions differ");
  }
  Dense out(va.rows(), vb.cols());
  for (std::size_t i = 0; i < va.rows(); ++i) {
    for (std::size_t k = 0; k < va.cols(); ++k) {
      const double aik = va(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < vb.cols(); ++j) {
        out(i, j) += aik * vb(k, j);
      }
    }
  }
  return push(std::move(out), [pa = a.id, pb = b.id](Tape& t, std::size_t self) {
    const Dense& g = t.grads_[self];
    const Dense& va = t.node_value(pa);
    const Dense& vb = t.node_value(pb);
    Dense& ga = t.grad_buffer(pa);  // g * b^T
    for (std::size_t i = 0; i < ga.rows(); ++i) {
      for (std::size_t j = 0; j < vb.cols(); ++j) {
        const double gij = g(i, j);
        if (gij == 0.0) continue;
        for (std::size_t k = 0; k < ga.cols(); ++k) {
          ga(i, k) += gij * vb(k, j);
        }
      }
    }
    Dense& gb = t.grad_buffer(pb);  // a^T * g
    for (std::size_t i = 0; i < va.rows(); ++i) {
      for (std::size_t k = 0; k < va.cols(); ++k) {
        const double aik = va(i, k);
        if (aik == 0.0) continue;
        for (std::size_t j = 0; j < gb.cols(); ++j) {
          gb(k, j) += aik * g(i, j);
        }
      }
    }
  });
}

Var Tape::linear(Var x, Var w, Var bias) {
  const Dense& vx = node_value(x.id);
  const Dense& vw = node_value(w.id);
  const Dense& vb = node_value(bias.id);
  if (vx.cols() != vw.cols()) {
    throw ContractError("linear: input width does not match weight columns");
  }
  if (vb.rows() != 1 || vb.cols() != vw.rows()) {
    throw ContractError("linear: bias must be 1 x out");
  }
  Dense out(vx.rows(), vw.rows());
  for (std::size_t i = 0; i < vx.rows(); ++i) {
    for (std::size_t o = 0; o < vw.rows(); ++o) {
      double acc = vb(0, o);
      for (std::size_t k = 0; k < vx.cols(); ++k) {
        acc += vx(i, k) * vw(o, k);
      }
      out(i, o) = acc;
    }
  }
  return push(std::move(out),
              [px = x.id, pw = w.id, pb = bias.id](Tape& t, std::size_t self) {
                const Dense& g = t.grads_[self];
                const Dense& vx = t.node_value(px);
                const Dense& vw = t.node_value(pw);
                Dense& gx = t.grad_buffer(px);  // g * w
                for (std::size_t i = 0; i < gx.rows(); ++i) {
                  for (std::size_t o = 0; o < vw.rows(); ++o) {
                    const double gio = g(i, o);
                    if (gio == 0.0) continue;
                    for (std::size_t k = 0; k < gx.cols(); ++k) {
                      gx(i, k) += gio * vw(o, k);
                    }
                  }
                }
                Dense& gw = t.grad_buffer(pw);  // g^T * x
                for (std::size_t i = 0; i < vx.rows(); ++i) {
                  for (std::size_t o = 0; o < gw.rows(); ++o) {
                    const double gio = g(i, o);
                    if (gio == 0.0) continue;
                    for (std::size_t k = 0; k < gw.cols(); ++k) {
                      gw(o, k) += gio * vx(i, k);
                    }
                  }
                }
                Dense& gb = t.grad_buffer(pb);  // column sums of g
                for (std::size_t i = 0; i < g.rows(); ++i) {
                  for (std::size_t o = 0; o < g.cols(); ++o) {
                    gb(0, o) += g(i, o);
                  }
                }
              });
}

Var Tape::add(Var a, Var b) {
  const Dense& va = node_value(a.id);
  const Dense& vb = node_value(b.id);
  require_same_shape(va, vb, "add");
  Dense out = va;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += vb[i];
  return push(std::move(out), [pa = a.id, pb = b.id](Tape& t, std::size_t self) {
    const Dense& g = t.grads_[self];
    Dense& ga = t.grad_buffer(pa);
    Dense& gb = t.grad_buffer(pb);
    for (std::size_t i = 0; i < g.size(); ++i) {
      ga[i] += g[i];
      gb[i] += g[i];
    }
  });
}

Var Tape::sub(Var a, Var b) {
  const Dense& va = node_value(a.id);
  const Dense& vb = node_value(b.id);
  require_same_shape(va, vb, "sub");
  Dense out = va;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= vb[i];
  return push(std::move(out), [pa = a.id, pb = b.id](Tape& t, std::size_t self) {
    const Dense& g = t.grads_[self];
    Dense& ga = t.grad_buffer(pa);
    Dense& gb = t.grad_buffer(pb);
    for (std::size_t i = 0; i < g.size(); ++i) {
      ga[i] += g[i];
      gb[i] -= g[i];
    }
  });
}

Var Tape::affine(Var x, double scale, double offset) {
  Dense out = node_value(x.id);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = scale * out[i] + offset;
  return push(std::move(out), [px = x.id, scale](Tape& t, std::size_t self) {
    const Dense& g = t.grads_[self];
    Dense& gx = t.grad_buffer(px);
    for (std::size_t i = 0; i < g.size(); ++i) gx[i] += scale * g[i];
  });
}

Var Tape::hadamard(Var a, Var b) {
  const Dense& va = node_value(a.id);
  const Dense& vb = node_value(b.id);
  require_same_shape(va, vb, "hadamard");
  Dense out = va;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= vb[i];
  return push(std::move(out), [pa = a.id, pb = b.id](Tape& t, std::size_t self) {
    const Dense& g = t.grads_[self];
    const Dense& va = t.node_value(pa);
    const Dense& vb = t.node_value(pb);
    Dense& ga = t.grad_buffer(pa);
    Dense& gb = t.grad_buffer(pb);
    for (std::size_t i = 0; i < g.size(); ++i) {
      ga[i] += g[i] * vb[i];
      gb[i] += g[i] * va[i];
    }
  });
}

Var Tape::sigmoid(Var x) {
  Dense out = node_value(x.id);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = 1.0 / (1.0 + std::exp(-out[i]));
  }
  return push(std::move(out), [px = x.id](Tape& t, std::size_t self) {
    const Dense& g = t.grads_[self];
    const Dense& y = t.node_value(self);
    Dense& gx = t.grad_buffer(px);
    for (std::size_t i = 0; i < g.size(); ++i) {
      gx[i] += g[i] * y[i] * (1.0 - y[i]);
    }
  });
}

Var Tape::tanh(Var x) {
  Dense out = node_value(x.id);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::tanh(out[i]);
  return push(std::move(out), [px = x.id](Tape& t, std::size_t self) {
    const Dense& g = t.grads_[self];
    const Dense& y = t.node_value(self);
    Dense& gx = t.grad_buffer(px);
    for (std::size_t i = 0; i < g.size(); ++i) {
      gx[i] += g[i] * (1.0 - y[i] * y[i]);
    }
  });
}

Var Tape::relu(Var x) {
  Dense out = node_value(x.id);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(0.0, out[i]);
  return push(std::move(out), [px = x.id](Tape& t, std::size_t self) {
    const Dense& g = t.grads_[self];
    const Dense& vx = t.node_value(px);
    Dense& gx = t.grad_buffer(px);
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (vx[i] > 0.0) gx[i] += g[i];
    }
  });
}

Var Tape::softmax_rows(Var x) {
  Dense out = node_value(x.id);
  for (std::size_t r = 0; r < out.rows(); ++r) {
    double mx = out(r, 0);
    for (std::size_t c = 1; c < out.cols(); ++c) mx = std::max(mx, out(r, c));
    double denom = 0.0;
    for (std::size_t c = 0; c < out.cols(); ++c) {
      out(r, c) = std::exp(out(r, c) - mx);
      denom += out(r, c);
    }
    for (std::size_t c = 0; c < out.cols(); ++c) out(r, c) /= denom;
  }
  return push(std::move(out), [px = x.id](Tape& t, std::size_t self) {
    const Dense& g = t.grads_[self];
    const Dense& y = t.node_value(self);
    Dense& gx = t.grad_buffer(px);
    for (std::size_t r = 0; r < y.rows(); ++r) {
      double dot = 0.0;
      for (std::size_t c = 0; c < y.cols(); ++c) dot += g(r, c) * y(r, c);
      for (std::size_t c = 0; c < y.cols(); ++c) {
        gx(r, c) += y(r, c) * (g(r, c) - dot);
      }
    }
  });
}

Var Tape::concat_cols(Var a, Var b) {
  const Dense& va = node_value(a.id);
  const Dense& vb = node_value(b.id);
  if (va.rows() != vb.rows()) {
    throw ContractError("concat_cols: row counts differ");
  }
  Dense out(va.rows(), va.cols() + vb.cols());
  for (std::size_t r = 0; r < out.rows(); ++r) {
    for (std::size_t c = 0; c < va.cols(); ++c) out(r, c) = va(r, c);
    for (std::size_t c = 0; c < vb.cols(); ++c) out(r, va.cols() + c) = vb(r, c);
  }
  return push(std::move(out),
              [pa = a.id, pb = b.id, split = va.cols()](Tape& t, std::size_t self) {
                const Dense& g = t.grads_[self];
                Dense& ga = t.grad_buffer(pa);
                Dense& gb = t.grad_buffer(pb);
                for (std::size_t r = 0; r < g.rows(); ++r) {
                  for (std::size_t c = 0; c < split; ++c) ga(r, c) += g(r, c);
                  for (std::size_t c = 0; c < gb.cols(); ++c) {
                    gb(r, c) += g(r, split + c);
                  }
                }
              });
}

Var Tape::gather_rows(Var x, std::vector<std::size_t> rows) {
  const Dense& vx = node_value(x.id);
  if (rows.empty()) throw ContractError("gather_rows: empty selection");
  for (std::size_t r : rows) {
    if (r >= vx.rows()) throw ContractError("gather_rows: row out of range");
  }
  Dense out(rows.size(), vx.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t c = 0; c < vx.cols(); ++c) out(i, c) = vx(rows[i], c);
  }
  return push(std::move(out),
              [px = x.id, rows = std::move(rows)](Tape& t, std::size_t self) {
                const Dense& g = t.grads_[self];
                Dense& gx = t.grad_buffer(px);
                for (std::size_t i = 0; i < rows.size(); ++i) {
                  for (std::size_t c = 0; c < g.cols(); ++c) {
                    gx(rows[i], c) += g(i, c);
                  }
                }
              });
}

Var Tape::repeat_rows(Var x, std::size_t count) {
  const Dense& vx = node_value(x.id);
  if (vx.rows() != 1) throw ContractError("repeat_rows: input must be a single row");
  if (count == 0) throw ContractError("repeat_rows: count must be positive");
  Dense out(count, vx.cols());
  for (std::size_t r = 0; r < count; ++r) {
    for (std::size_t c = 0; c < vx.cols(); ++c) out(r, c) = vx(0, c);
  }
  return push(std::move(out), [px = x.id](Tape& t, std::size_t self) {
    const Dense& g = t.grads_[self];
    Dense& gx = t.grad_buffer(px);
    for (std::size_t r = 0; r < g.rows(); ++r) {
      for (std::size_t c = 0; c < g.cols(); ++c) gx(0, c) += g(r, c);
    }
  });
}

Var Tape::transpose(Var x) {
  const Dense& vx = node_value(x.id);
  Dense out(vx.cols(), vx.rows());
  for (std::size_t r = 0; r < vx.rows(); ++r) {
    for (std::size_t c = 0; c < vx.cols(); ++c) out(c, r) = vx(r, c);
  }
  return push(std::move(out), [px = x.id](Tape& t, std::size_t self) {
    const Dense& g = t.grads_[self];
    Dense& gx = t.grad_buffer(px);
    for (std::size_t r = 0; r < g.rows(); ++r) {
      for (std::size_t c = 0; c < g.cols(); ++c) gx(c, r) += g(r, c);
    }
  });
}

Var Tape::sum_cols(Var x) {
  const Dense& vx = node_value(x.id);
  Dense out(vx.rows(), 1);
  for (std::size_t r = 0; r < vx.rows(); ++r) {
    double acc = 0.0;
    for (std::size_t c = 0; c < vx.cols(); ++c) acc += vx(r, c);
    out(r, 0) = acc;
  }
  return push(std::move(out), [px = x.id](Tape& t, std::size_t self) {
    const Dense& g = t.grads_[self];
    Dense& gx = t.grad_buffer(px);
    for (std::size_t r = 0; r < gx.rows(); ++r) {
      for (std::size_t c = 0; c < gx.cols(); ++c) gx(r, c) += g(r, 0);
    }
  });
}

Var Tape::sum_all(Var x) {
  const Dense& vx = node_value(x.id);
  double acc = 0.0;
  for (std::size_t i = 0; i < vx.size(); ++i) acc += vx[i];
  return push(Dense::scalar(acc), [px = x.id](Tape& t, std::size_t self) {
    const double g = t.grads_[self][0];
    Dense& gx = t.grad_buffer(px);
    for (std::size_t i = 0; i < gx.size(); ++i) gx[i] += g;
  });
}

Var Tape::mean_all(Var x) {
  const Dense& vx = node_value(x.id);
  double acc = 0.0;
  for (std::size_t i = 0; i < vx.size(); ++i) acc += vx[i];
  const double inv = 1.0 / static_cast<double>(vx.size());
  return push(Dense::scalar(acc * inv), [px = x.id, inv](Tape& t, std::size_t self) {
    const double g = t.grads_[self][0] * inv;
    Dense& gx = t.grad_buffer(px);
    for (std::size_t i = 0; i < gx.size(); ++i) gx[i] += g;
  });
}

Var Tape::square(Var x) {
  Dense out = node_value(x.id);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= out[i];
  return push(std::move(out), [px = x.id](Tape& t, std::size_t self) {
    const Dense& g = t.grads_[self];
    const Dense& vx = t.node_value(px);
    Dense& gx = t.grad_buffer(px);
    for (std::size_t i = 0; i < g.size(); ++i) gx[i] += 2.0 * vx[i] * g[i];
  });
}

Var Tape::log(Var x) {
  Dense out = node_value(x.id);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::log(out[i]);
  return push(std::move(out), [px = x.id](Tape& t, std::size_t self) {
    const Dense& g = t.grads_[self];
    const Dense& vx = t.node_value(px);
    Dense& gx = t.grad_buffer(px);
    for (std::size_t i = 0; i < g.size(); ++i) gx[i] += g[i] / vx[i];
  });
}

Var Tape::clamp(Var x, double lo, double hi) {
  Dense out = node_value(x.id);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::min(hi, std::max(lo, out[i]));
  }
  return push(std::move(out), [px = x.id, lo, hi](Tape& t, std::size_t self) {
    const Dense& g = t.grads_[self];
    const Dense& vx = t.node_value(px);
    Dense& gx = t.grad_buffer(px);
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (vx[i] > lo && vx[i] < hi) gx[i] += g[i];
    }
  });
}

Var Tape::cosine(Var a, Var b) {
  const Dense& va = node_value(a.id);
  const Dense& vb = node_value(b.id);
  require_same_shape(va, vb, "cosine");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < va.size(); ++i) {
    dot += va[i] * vb[i];
    na += va[i] * va[i];
    nb += vb[i] * vb[i];
  }
  na = std::sqrt(na);
  nb = std::sqrt(nb);
  const bool degenerate = na == 0.0 || nb == 0.0;
  const double value = degenerate ? 0.0 : dot / (na * nb);
  return push(Dense::scalar(value),
              [pa = a.id, pb = b.id, na, nb, value, degenerate](Tape& t,
                                                                std::size_t self) {
                if (degenerate) return;
                const double g = t.grads_[self][0];
                const Dense& va = t.node_value(pa);
                const Dense& vb = t.node_value(pb);
                Dense& ga = t.grad_buffer(pa);
                Dense& gb = t.grad_buffer(pb);
                const double inv = 1.0 / (na * nb);
                for (std::size_t i = 0; i < va.size(); ++i) {
                  ga[i] += g * (vb[i] * inv - value * va[i] / (na * na));
                  gb[i] += g * (va[i] * inv - value * vb[i] / (nb * nb));
                }
              });
}

Var Tape::min_pair(Var a, Var b) {
  const Dense& va = node_value(a.id);
  const Dense& vb = node_value(b.id);
  require_same_shape(va, vb, "min_pair");
  Dense out = va;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::min(va[i], vb[i]);
  return push(std::move(out), [pa = a.id, pb = b.id](Tape& t, std::size_t self) {
    const Dense& g = t.grads_[self];
    const Dense& va = t.node_value(pa);
    const Dense& vb = t.node_value(pb);
    Dense& ga = t.grad_buffer(pa);
    Dense& gb = t.grad_buffer(pb);
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (va[i] < vb[i]) {
        ga[i] += g[i];
      } else if (vb[i] < va[i]) {
        gb[i] += g[i];
      } else {
        ga[i] += 0.5 * g[i];
        gb[i] += 0.5 * g[i];
      }
    }
  });
}

Var Tape::max_pair(Var a, Var b) {
  const Dense& va = node_value(a.id);
  const Dense& vb = node_value(b.id);
  require_same_shape(va, vb, "max_pair");
  Dense out = va;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(va[i], vb[i]);
  return push(std::move(out), [pa = a.id, pb = b.id](Tape& t, std::size_t self) {
    const Dense& g = t.grads_[self];
    const Dense& va = t.node_value(pa);
    const Dense& vb = t.node_value(pb);
    Dense& ga = t.grad_buffer(pa);
    Dense& gb = t.grad_buffer(pb);
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (va[i] > vb[i]) {
        ga[i] += g[i];
      } else if (vb[i] > va[i]) {
        gb[i] += g[i];
      } else {
        ga[i] += 0.5 * g[i];
        gb[i] += 0.5 * g[i];
      }
    }
  });
}

Var Tape::entry(Var x, std::size_t r, std::size_t c) {
  const Dense& vx = node_value(x.id);
  if (r >= vx.rows() || c >= vx.cols()) {
    throw ContractError("entry: index out of range");
  }
  return push(Dense::scalar(vx(r, c)), [px = x.id, r, c](Tape& t, std::size_t self) {
    t.grad_buffer(px)(r, c) += t.grads_[self][0];
  });
}

void Tape::backward(Var output) {
  if (output.id >= nodes_.size()) {
    throw ContractError("backward: unknown node");
  }
  if (!nodes_[output.id].value.is_scalar()) {
    throw ContractError("backward: output must be scalar");
  }
  if (backward_done_) {
    throw ContractError("backward: tape already differentiated");
  }
  backward_done_ = true;
  grad_buffer(output.id)[0] = 1.0;
  for (std::size_t id = output.id + 1; id-- > 0;) {
    if (!grad_present_[id]) continue;
    if (nodes_[id].backprop) nodes_[id].backprop(*this, id);
  }
}

const Dense& Tape::value(Var v) const {
  if (v.id >= nodes_.size()) throw ContractError("value: unknown node");
  return nodes_[v.id].value;
}

const Dense& Tape::grad(Var v) {
  if (v.id >= nodes_.size()) throw ContractError("grad: unknown node");
  return grad_buffer(v.id);
}

}  // namespace edgewise
