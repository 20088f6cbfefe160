// Compares the OpenMP kernels against the serial reference implementations:
// wall-clock speedup plus a bitwise-equality check on every output.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "taep/kernels.hpp"
#include "taep/rng.hpp"

namespace {

using taep::Matrix;
namespace linalg = taep::linalg;

Matrix random_matrix(std::size_t rows, std::size_t cols, taep::SplitMix64& rng) {
    Matrix out(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) out(i, j) = rng.next_gaussian();
    return out;
}

double time_best_of(int repeats, const std::function<void()>& body) {
    double best = 1e300;
    for (int rep = 0; rep < repeats; ++rep) {
        const auto start = std::chrono::steady_clock::now();
        body();
        const auto stop = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double>(stop - start).count());
    }
    return best;
}

bool bitwise_equal(const Matrix& a, const Matrix& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() &&
           std::memcmp(a.data(), b.data(), sizeof(double) * a.rows() * a.cols()) == 0;
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() &&
           (a.empty() || std::memcmp(a.data(), b.data(), sizeof(double) * a.size()) == 0);
}

struct Case {
    std::string name;
    double serial_seconds;
    double parallel_seconds;
    bool identical;
};

}  // namespace

int main(int argc, char** argv) {
    std::size_t n = 768;
    int repeats = 3;
    if (argc > 1) n = static_cast<std::size_t>(std::stoul(argv[1]));
    if (argc > 2) repeats = std::stoi(argv[2]);

#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads = %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP disabled (serial build)\n");
#endif
    std::printf("square size n = %zu, best of %d runs\n\n", n, repeats);

    taep::SplitMix64 rng(42);
    const Matrix a = random_matrix(n, n, rng);
    const Matrix b = random_matrix(n, n, rng);
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = rng.next_gaussian();

    std::vector<Case> cases;

    {
        Matrix serial_out, parallel_out;
        const double ts = time_best_of(repeats, [&] { serial_out = linalg::serial::matmul(a, b); });
        const double tp = time_best_of(repeats, [&] { parallel_out = linalg::matmul(a, b); });
        cases.push_back({"matmul", ts, tp, bitwise_equal(serial_out, parallel_out)});
    }
    {
        Matrix serial_out, parallel_out;
        const double ts =
            time_best_of(repeats, [&] { serial_out = linalg::serial::matmul_at_b(a, b); });
        const double tp = time_best_of(repeats, [&] { parallel_out = linalg::matmul_at_b(a, b); });
        cases.push_back({"matmul_at_b", ts, tp, bitwise_equal(serial_out, parallel_out)});
    }
    {
        Matrix serial_out, parallel_out;
        const double ts =
            time_best_of(repeats, [&] { serial_out = linalg::serial::matmul_a_bt(a, b); });
        const double tp = time_best_of(repeats, [&] { parallel_out = linalg::matmul_a_bt(a, b); });
        cases.push_back({"matmul_a_bt", ts, tp, bitwise_equal(serial_out, parallel_out)});
    }
    {
        std::vector<double> serial_out, parallel_out;
        const double ts = time_best_of(repeats, [&] { serial_out = linalg::serial::matvec(a, x); });
        const double tp = time_best_of(repeats, [&] { parallel_out = linalg::matvec(a, x); });
        cases.push_back({"matvec", ts, tp, bitwise_equal(serial_out, parallel_out)});
    }
    {
        std::vector<double> serial_out, parallel_out;
        const double ts =
            time_best_of(repeats, [&] { serial_out = linalg::serial::matvec_at(a, x); });
        const double tp = time_best_of(repeats, [&] { parallel_out = linalg::matvec_at(a, x); });
        cases.push_back({"matvec_at", ts, tp, bitwise_equal(serial_out, parallel_out)});
    }

    std::printf("%-12s %12s %12s %9s %10s\n", "kernel", "serial (s)", "parallel (s)", "speedup",
                "bitwise");
    bool all_identical = true;
    for (const Case& c : cases) {
        std::printf("%-12s %12.4f %12.4f %8.2fx %10s\n", c.name.c_str(), c.serial_seconds,
                    c.parallel_seconds, c.serial_seconds / c.parallel_seconds,
                    c.identical ? "equal" : "DIFFER");
        all_identical = all_identical && c.identical;
    }
    if (!all_identical) {
        std::printf("\nFAIL: parallel kernels are not bitwise-identical to the reference\n");
        return 1;
    }
    std::printf("\nall parallel outputs bitwise-identical to the serial reference\n");
    return 0;
}
