#include <doctest.h>

#include <cmath>

#include "edgewise/dense.hpp"
#include "edgewise/errors.hpp"
#include "edgewise/gradcheck.hpp"
#include "edgewise/rng.hpp"
#include "edgewise/tape.hpp"
#include "oracles.hpp"

using namespace edgewise;

namespace {

Dense random_dense(std::size_t rows, std::size_t cols, Rng& rng, double lo = -1.0,
                   double hi = 1.0) {
  Dense m(rows, cols);
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = rng.uniform(lo, hi);
  return m;
}

/// Central finite difference of a scalar-valued tape program with respect to
/// one leaf, entry by entry.
Dense numeric_grad(const std::function<Var(Tape&, Var)>& program, Dense input,
                   double h = 1e-6) {
  Dense grad(input.rows(), input.cols());
  for (std::size_t i = 0; i < input.size(); ++i) {
    const double saved = input[i];
    input[i] = saved + h;
    Tape tp;
    const double plus = tp.value(program(tp, tp.input(input)))[0];
    input[i] = saved - h;
    Tape tm;
    const double minus = tm.value(program(tm, tm.input(input)))[0];
    input[i] = saved;
    grad[i] = (plus - minus) / (2.0 * h);
  }
  return grad;
}

void check_unary_gradient(const std::function<Var(Tape&, Var)>& program,
                          const Dense& input, double tol = 1e-4) {
  Tape tape;
  Var x = tape.input(input);
  Var y = program(tape, x);
  tape.backward(y);
  const Dense analytic = tape.grad(x);
  const Dense numeric = numeric_grad(program, input);
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    CHECK(gradient_rel_error(analytic[i], numeric[i]) < tol);
  }
}

}  // namespace

TEST_CASE("dense basics") {
  Dense m(2, 3);
  CHECK(m.rows() == 2);
  CHECK(m.cols() == 3);
  CHECK(m.size() == 6);
  m(1, 2) = 4.5;
  CHECK(m[5] == 4.5);
  CHECK_THROWS_AS(Dense(0, 3), InvalidArgument);
  CHECK_THROWS_AS(Dense(2, 2, {1.0, 2.0}), InvalidArgument);
  CHECK(Dense::identity(3)(1, 1) == 1.0);
  CHECK(Dense::identity(3)(0, 1) == 0.0);
}

TEST_CASE("backward of identity and tanh at zero") {
  Tape tape;
  Var x = tape.input(Dense::scalar(2.0));
  tape.backward(x);
  CHECK(tape.grad(x)[0] == 1.0);

  Tape tape2;
  Var y = tape2.input(Dense::scalar(0.0));
  Var t = tape2.tanh(y);
  tape2.backward(t);
  CHECK(tape2.grad(y)[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("backward requires a scalar output") {
  Tape tape;
  Var x = tape.input(Dense(2, 2));
  CHECK_THROWS_AS(tape.backward(x), ContractError);
}

TEST_CASE("sum(sigmoid(W v)) gradient matches finite differences") {
  Rng rng(17);
  const Dense w = random_dense(3, 3, rng);
  const Dense v = random_dense(3, 1, rng);
  auto program = [&](Tape& t, Var wv) {
    Var vv = t.input(v);
    return t.sum_all(t.sigmoid(t.matmul(wv, vv)));
  };
  Tape tape;
  Var wvar = tape.input(w);
  Var out = program(tape, wvar);
  tape.backward(out);
  const Dense analytic = tape.grad(wvar);
  const Dense numeric = numeric_grad(program, w, 1e-5);
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    CHECK(gradient_rel_error(analytic[i], numeric[i]) < 1e-4);
  }
}

TEST_CASE("every primitive matches central finite differences over random trials") {
  Rng rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t rows = 1 + rng.index(3);
    const std::size_t cols = 1 + rng.index(4);
    const Dense a = random_dense(rows, cols, rng);
    const Dense b = random_dense(rows, cols, rng);

    // smooth elementwise ops away from saturation: tight tolerance
    check_unary_gradient(
        [](Tape& t, Var x) { return t.sum_all(t.sigmoid(x)); }, a, 1e-6);
    check_unary_gradient([](Tape& t, Var x) { return t.sum_all(t.tanh(x)); }, a,
                         1e-6);
    check_unary_gradient([](Tape& t, Var x) { return t.sum_all(t.square(x)); }, a,
                         1e-6);
    check_unary_gradient(
        [](Tape& t, Var x) { return t.sum_all(t.affine(x, -1.7, 0.4)); }, a, 1e-6);
    check_unary_gradient(
        [](Tape& t, Var x) { return t.mean_all(t.softmax_rows(x)); }, a, 1e-4);
    check_unary_gradient(
        [](Tape& t, Var x) { return t.sum_all(t.transpose(x)); }, a, 1e-6);
    check_unary_gradient(
        [](Tape& t, Var x) { return t.sum_all(t.sum_cols(t.square(x))); }, a, 1e-6);

    // relu: keep inputs away from the kink
    Dense shifted = a;
    for (std::size_t i = 0; i < shifted.size(); ++i) {
      if (std::abs(shifted[i]) < 1e-3) shifted[i] = 0.5;
    }
    check_unary_gradient([](Tape& t, Var x) { return t.sum_all(t.relu(x)); },
                         shifted, 1e-4);

    // binary ops, differentiated through the first argument
    check_unary_gradient(
        [&](Tape& t, Var x) { return t.sum_all(t.hadamard(x, t.input(b))); }, a,
        1e-6);
    check_unary_gradient(
        [&](Tape& t, Var x) { return t.sum_all(t.add(x, t.input(b))); }, a, 1e-6);
    check_unary_gradient(
        [&](Tape& t, Var x) { return t.sum_all(t.sub(x, t.input(b))); }, a, 1e-6);
    check_unary_gradient(
        [&](Tape& t, Var x) { return t.sum_all(t.concat_cols(x, t.input(b))); }, a,
        1e-6);
    check_unary_gradient([&](Tape& t, Var x) { return t.cosine(x, t.input(b)); }, a,
                         1e-4);

    // min/max pairing: nudge ties apart first
    Dense b2 = b;
    for (std::size_t i = 0; i < b2.size(); ++i) {
      if (std::abs(b2[i] - a[i]) < 1e-3) b2[i] += 0.1;
    }
    check_unary_gradient(
        [&](Tape& t, Var x) { return t.sum_all(t.min_pair(x, t.input(b2))); }, a,
        1e-4);
    check_unary_gradient(
        [&](Tape& t, Var x) { return t.sum_all(t.max_pair(x, t.input(b2))); }, a,
        1e-4);

    // log over positive inputs
    Dense positive = random_dense(rows, cols, rng, 0.2, 2.0);
    check_unary_gradient([](Tape& t, Var x) { return t.sum_all(t.log(x)); },
                         positive, 1e-4);

    // matmul and linear
    const Dense m1 = random_dense(2, 3, rng);
    const Dense m2 = random_dense(3, 2, rng);
    check_unary_gradient(
        [&](Tape& t, Var x) { return t.sum_all(t.matmul(x, t.input(m2))); }, m1,
        1e-6);
    check_unary_gradient(
        [&](Tape& t, Var x) { return t.sum_all(t.matmul(t.input(m1), x)); }, m2,
        1e-6);
    const Dense w = random_dense(4, 3, rng);
    const Dense bias = random_dense(1, 4, rng);
    check_unary_gradient(
        [&](Tape& t, Var x) {
          return t.sum_all(t.linear(x, t.input(w), t.input(bias)));
        },
        m1, 1e-6);
    check_unary_gradient(
        [&](Tape& t, Var x) {
          return t.sum_all(t.linear(t.input(m1), x, t.input(bias)));
        },
        w, 1e-6);
    check_unary_gradient(
        [&](Tape& t, Var x) {
          return t.sum_all(t.linear(t.input(m1), t.input(w), x));
        },
        bias, 1e-6);

    // gather / repeat
    check_unary_gradient(
        [&](Tape& t, Var x) {
          return t.sum_all(t.square(t.gather_rows(x, {0, rows - 1, 0})));
        },
        a, 1e-6);
    const Dense single = random_dense(1, cols, rng);
    check_unary_gradient(
        [&](Tape& t, Var x) { return t.sum_all(t.square(t.repeat_rows(x, 3))); },
        single, 1e-6);
  }
}

TEST_CASE("backward is additive across subexpressions") {
  Rng rng(5);
  const Dense x0 = random_dense(2, 2, rng);

  Tape t1;
  Var a1 = t1.input(x0);
  Var f1 = t1.sum_all(t1.sigmoid(a1));
  t1.backward(f1);

  Tape t2;
  Var a2 = t2.input(x0);
  Var f2 = t2.sum_all(t2.tanh(a2));
  t2.backward(f2);

  Tape t3;
  Var a3 = t3.input(x0);
  Var f3 = t3.add(t3.sum_all(t3.sigmoid(a3)), t3.sum_all(t3.tanh(a3)));
  t3.backward(f3);

  for (std::size_t i = 0; i < x0.size(); ++i) {
    CHECK(std::abs(t3.grad(a3)[i] - (t1.grad(a1)[i] + t2.grad(a2)[i])) <= 1e-12);
  }
}

TEST_CASE("softmax rows sum to one and shift invariance") {
  Rng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const Dense x = random_dense(1 + rng.index(4), 2 + rng.index(5), rng, -5, 5);
    Tape tape;
    const Dense& y = tape.value(tape.softmax_rows(tape.input(x)));
    for (std::size_t r = 0; r < y.rows(); ++r) {
      double sum = 0.0;
      for (std::size_t c = 0; c < y.cols(); ++c) sum += y(r, c);
      CHECK(std::abs(sum - 1.0) < 1e-9);
    }

    Dense shifted = x;
    const double shift = rng.uniform(-3, 3);
    for (std::size_t r = 0; r < x.rows(); ++r) {
      for (std::size_t c = 0; c < x.cols(); ++c) shifted(r, c) += shift;
    }
    Tape tape2;
    const Dense& y2 = tape2.value(tape2.softmax_rows(tape2.input(shifted)));
    CHECK(max_abs_diff(y, y2) < 1e-9);
  }
}

TEST_CASE("softmax agrees with the exp-normalize oracle") {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> row(3);
    for (double& v : row) v = rng.uniform(-2, 2);
    Tape tape;
    const Dense& got = tape.value(
        tape.softmax_rows(tape.input(Dense::row_vector(row))));
    const auto expected = oracle::softmax_brute_force(row);
    for (std::size_t c = 0; c < row.size(); ++c) {
      CHECK(got(0, c) == doctest::Approx(expected[c]).epsilon(1e-12));
    }
  }
}

TEST_CASE("identical seeds give bitwise-identical values and gradients") {
  auto run = [] {
    Rng rng(123);
    Dense x = random_dense(3, 3, rng);
    Tape tape;
    Var xv = tape.input(x);
    Var out = tape.sum_all(tape.sigmoid(tape.matmul(xv, xv)));
    tape.backward(out);
    return std::pair{tape.value(out)[0], tape.grad(xv)};
  };
  const auto [v1, g1] = run();
  const auto [v2, g2] = run();
  CHECK(v1 == v2);
  CHECK(g1 == g2);
}

TEST_CASE("cosine handles zero-norm inputs") {
  Tape tape;
  Var a = tape.input(Dense::row_vector({0.0, 0.0}));
  Var b = tape.input(Dense::row_vector({1.0, 2.0}));
  Var c = tape.cosine(a, b);
  CHECK(tape.value(c)[0] == 0.0);
  tape.backward(c);
  CHECK(tape.grad(b)[0] == 0.0);
}

TEST_CASE("min and max pairing") {
  Tape tape;
  Var a = tape.input(Dense::row_vector({1.0, -2.0}));
  Var b = tape.input(Dense::row_vector({0.0, 3.0}));
  const Dense& mn = tape.value(tape.min_pair(a, b));
  const Dense& mx = tape.value(tape.max_pair(a, b));
  CHECK(mn(0, 0) == 0.0);
  CHECK(mn(0, 1) == -2.0);
  CHECK(mx(0, 0) == 1.0);
  CHECK(mx(0, 1) == 3.0);
}
