#include "icct/walk.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <random>
#include <thread>

#include "icct/units.hpp"

namespace icct {

Matrix ChannelChain::coin_matrix() const {
    if (n_coins < 1) throw Error("channel chain needs at least one coin");
    Matrix p = Matrix::Zero(n_coins, n_coins);
    for (const Channel& c : channels) {
        if (c.from < 0 || c.from >= n_coins || c.to < 0 || c.to >= n_coins)
            throw Error("channel endpoint outside the coin set");
        if (c.prob < -1e-12) throw Error("negative branch probability");
        p(c.from, c.to) += c.prob;
    }
    for (int i = 0; i < n_coins; ++i)
        if (std::abs(p.row(i).sum() - 1.0) > 1e-6)
            throw Error("branch probabilities must sum to one per coin");
    return p;
}

Vector limiting_distribution(const Matrix& p) {
    const auto n = p.rows();
    if (n < 1 || p.cols() != n) throw Error("transition matrix must be square");
    Matrix q = p;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double row = q.row(i).sum();
        if (std::abs(row - 1.0) > 1e-6 || q.row(i).minCoeff() < -1e-9)
            throw Error("matrix is not stochastic");
        q.row(i) /= row;
    }
    Eigen::FullPivLU<Matrix> lu(q.transpose() - Matrix::Identity(n, n));
    lu.setThreshold(1e-9);
    const Matrix kernel = lu.kernel();
    if (lu.dimensionOfKernel() != 1)
        throw DegenerateChain("stationary distribution is not unique (unit eigenvalue not simple)");
    Vector pi = kernel.col(0);
    pi /= pi.sum();
    if (pi.minCoeff() < -1e-9) throw DegenerateChain("stationary weights are not nonnegative");
    pi = pi.cwiseMax(0.0);
    pi /= pi.sum();
    return pi;
}

AnalyticMoments channel_chain_moments(const ChannelChain& chain, double t_total,
                                      ShiftConvention convention) {
    const Matrix p = chain.coin_matrix();
    const Vector pi = limiting_distribution(p);
    const size_t m = chain.channels.size();

    std::vector<double> w(m);
    double mean_step = 0.0, mean_time = 0.0;
    for (size_t c = 0; c < m; ++c) {
        const Channel& ch = chain.channels[c];
        w[c] = pi(ch.from) * ch.prob;
        mean_step += w[c] * ch.displacement;
        mean_time += w[c] * ch.mean_t;
    }
    if (!(mean_time > 0.0)) throw Error("mean step time must be positive");

    std::vector<Eigen::Vector2d> mu(m);
    Eigen::Matrix2d var_step = Eigen::Matrix2d::Zero();
    for (size_t c = 0; c < m; ++c) {
        const Channel& ch = chain.channels[c];
        mu[c] << ch.displacement - mean_step, ch.mean_t - mean_time;
        var_step += w[c] * mu[c] * mu[c].transpose();
        var_step(1, 1) += w[c] * std::max(0.0, ch.mean_t_sq - ch.mean_t * ch.mean_t);
    }

    // inter-step covariances through the fundamental matrix of the coin chain
    const Vector ones = Vector::Ones(chain.n_coins);
    const Matrix shift = convention == ShiftConvention::Column ? Matrix(ones * pi.transpose())
                                                               : Matrix(pi * ones.transpose());
    Eigen::FullPivLU<Matrix> lu(Matrix::Identity(chain.n_coins, chain.n_coins) - p + shift);
    if (!lu.isInvertible()) throw DegenerateChain("coin chain has no fundamental matrix");
    const Matrix fundamental = lu.inverse();
    for (size_t c = 0; c < m; ++c)
        for (size_t d = 0; d < m; ++d) {
            const double weight =
                w[c] * fundamental(chain.channels[c].to, chain.channels[d].from) * chain.channels[d].prob;
            const Eigen::Matrix2d outer = mu[c] * mu[d].transpose();
            var_step += weight * (outer + outer.transpose());
        }

    AnalyticMoments out;
    out.mean_step = mean_step;
    out.mean_step_time = mean_time;
    out.drift = mean_step / mean_time;
    const Eigen::Vector2d a(1.0, -out.drift);
    const double step_var_rate = a.dot(var_step * a) / mean_time;  // spacings^2 / fs
    out.diffusion = 0.5 * step_var_rate;
    out.mean_n = out.drift * t_total;
    out.var_n = step_var_rate * t_total;
    out.pi = pi;
    return out;
}

ChannelChain to_channel_chain(const RateTable& table) {
    ChannelChain chain;
    chain.n_coins = 2;  // coin 0: entered through the left/low site, 1: right/high
    for (int eps : {+1, -1})
        for (int delta : {+1, -1}) {
            const int c = channel_index(eps, delta);
            Channel ch;
            ch.from = eps > 0 ? 0 : 1;
            ch.to = delta > 0 ? 0 : 1;
            ch.displacement = delta;
            ch.prob = table.probability[c];
            ch.mean_t = table.mean_time[c];
            ch.mean_t_sq = table.mean_time_sq[c];
            chain.channels.push_back(ch);
        }
    return chain;
}

RatchetMoments analytic_moments(const RateTable& table, double t_total, ShiftConvention convention) {
    RatchetMoments out;
    static_cast<AnalyticMoments&>(out) = channel_chain_moments(to_channel_chain(table), t_total, convention);
    out.delta_pi = out.pi(0) - out.pi(1);
    return out;
}

namespace {

uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

int resolve_threads(int requested, long long n_traj) {
    int n = requested;
    if (n <= 0)
        if (const char* env = std::getenv("ICCT_THREADS")) n = std::atoi(env);
    if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
    n = std::clamp(n, 1, 256);
    return static_cast<int>(std::min<long long>(n, std::max<long long>(1, n_traj)));
}

McWalk summarize(const std::vector<double>& finals, double t_total) {
    McWalk out;
    out.n_traj = static_cast<long long>(finals.size());
    out.t_total = t_total;
    const double n = static_cast<double>(finals.size());
    double mean = 0.0;
    for (double v : finals) mean += v;
    mean /= n;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : finals) {
        const double d = v - mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    out.mean_n = mean;
    out.var_n = n > 1 ? m2 * n / (n - 1) : 0.0;
    out.se_mean = std::sqrt(out.var_n / n);
    out.se_var = std::sqrt(std::max(0.0, m4 - m2 * m2 * (n - 3) / (n - 1)) / n);
    out.skewness = m2 > 0 ? m3 / std::pow(m2, 1.5) : 0.0;
    out.excess_kurtosis = m2 > 0 ? m4 / (m2 * m2) - 3.0 : 0.0;
    for (double v : finals) ++out.histogram[llround(v)];
    return out;
}

void run_chunked(long long n_traj, int threads, uint64_t seed,
                 const std::function<double(std::mt19937_64&)>& trajectory, std::vector<double>& finals) {
    finals.resize(static_cast<size_t>(n_traj));
    auto worker = [&](long long lo, long long hi) {
        for (long long i = lo; i < hi; ++i) {
            std::mt19937_64 rng(splitmix64(seed + 0x9E3779B97F4A7C15ULL * static_cast<uint64_t>(i + 1)));
            finals[static_cast<size_t>(i)] = trajectory(rng);
        }
    };
    if (threads == 1) {
        worker(0, n_traj);
        return;
    }
    std::vector<std::thread> pool;
    const long long chunk = (n_traj + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        const long long lo = t * chunk, hi = std::min<long long>(n_traj, lo + chunk);
        if (lo < hi) pool.emplace_back(worker, lo, hi);
    }
    for (auto& th : pool) th.join();
}

}  // namespace

McWalk monte_carlo_walk(const RateTable& table, const WalkOptions& options) {
    table.validate();
    if (options.n_traj < 1) throw Error("need at least one trajectory");
    const double dt = table.dt();
    const size_t n = table.times.size();

    // conditional waiting-time CDFs G_c = F_c / p_c and their tail parameters
    std::array<std::vector<double>, kChannels> cdf;
    std::array<double, kChannels> tail_frac{};
    std::array<double, 2> branch_plus{};
    for (int eps : {+1, -1}) {
        const int cp = channel_index(eps, +1), cm = channel_index(eps, -1);
        branch_plus[eps > 0 ? 0 : 1] = table.probability[cp] / (table.probability[cp] + table.probability[cm]);
        for (int c : {cp, cm}) {
            cdf[c].assign(n, 0.0);
            if (table.probability[c] <= 0.0) continue;
            double acc = 0.0;
            for (size_t i = 1; i < n; ++i) {
                acc += 0.5 * dt * (table.density[c][i - 1] + table.density[c][i]);
                cdf[c][i] = std::min(1.0, acc / table.probability[c]);
            }
            tail_frac[c] = std::max(0.0, 1.0 - cdf[c].back());
        }
    }
    const double t_end = table.times.back();

    const Vector pi = limiting_distribution(to_channel_chain(table).coin_matrix());
    const double p_start_left = options.initial_coin > 0 ? 1.0 : (options.initial_coin < 0 ? 0.0 : pi(0));

    auto sample_time = [&](int c, int eps_idx, double u) {
        const auto& g = cdf[c];
        if (u >= g.back()) {  // exponential continuation past the grid
            const double k = table.tail_rate[eps_idx];
            if (!(k > 0.0) || tail_frac[c] <= 0.0) return t_end;
            return t_end + std::log(tail_frac[c] / (1.0 - u)) / k;
        }
        const auto it = std::upper_bound(g.begin(), g.end(), u);
        const size_t hi = static_cast<size_t>(it - g.begin());
        const double span = g[hi] - g[hi - 1];
        return span > 0.0 ? table.times[hi - 1] + dt * (u - g[hi - 1]) / span : table.times[hi];
    };

    auto trajectory = [&](std::mt19937_64& rng) {
        int eps = uniform01(rng) < p_start_left ? +1 : -1;
        double t = 0.0;
        long long pos = 0;
        while (true) {
            const int eps_idx = eps > 0 ? 0 : 1;
            const int delta = uniform01(rng) < branch_plus[eps_idx] ? +1 : -1;
            const double wait = sample_time(channel_index(eps, delta), eps_idx, uniform01(rng));
            if (t + wait > options.t_total) break;
            t += wait;
            pos += delta;
            eps = delta;
        }
        return static_cast<double>(pos);
    };

    std::vector<double> finals;
    run_chunked(options.n_traj, resolve_threads(options.threads, options.n_traj), options.seed, trajectory,
                finals);
    return summarize(finals, options.t_total);
}

ClassicalBaseline classical_baseline(double delta_e, double temperature, double p_intra,
                                     double uphill_rate, const WalkOptions& options) {
    if (p_intra < 0.0 || p_intra > 1.0) throw Error("intra-dimer branch probability must be in [0, 1]");
    if (!(uphill_rate > 0.0)) throw Error("uphill rate must be positive");
    if (!(temperature > 0.0)) throw InvalidBath("temperature must be positive");
    const double r_low = uphill_rate;
    const double r_high = uphill_rate * std::exp(delta_e / (units::k_B * temperature));

    ClassicalBaseline out;
    out.chain.n_coins = 2;  // coin 0: on a low site, 1: on a high site
    out.chain.channels = {
        {0, 1, 0.0, p_intra, 1.0 / r_low, 2.0 / (r_low * r_low)},
        {0, 1, -1.0, 1.0 - p_intra, 1.0 / r_low, 2.0 / (r_low * r_low)},
        {1, 0, 0.0, p_intra, 1.0 / r_high, 2.0 / (r_high * r_high)},
        {1, 0, 1.0, 1.0 - p_intra, 1.0 / r_high, 2.0 / (r_high * r_high)},
    };
    out.analytic = channel_chain_moments(out.chain, options.t_total);

    const double p_start_low = options.initial_coin > 0 ? 1.0 : (options.initial_coin < 0 ? 0.0 : out.analytic.pi(0));
    auto trajectory = [&](std::mt19937_64& rng) {
        int coin = uniform01(rng) < p_start_low ? 0 : 1;
        double t = 0.0;
        long long pos = 0;
        while (true) {
            const double rate = coin == 0 ? r_low : r_high;
            const bool intra = uniform01(rng) < p_intra;
            const double wait = -std::log(1.0 - uniform01(rng)) / rate;
            if (t + wait > options.t_total) break;
            t += wait;
            if (!intra) pos += coin == 0 ? -1 : +1;
            coin = 1 - coin;
        }
        return static_cast<double>(pos);
    };
    std::vector<double> finals;
    run_chunked(options.n_traj, resolve_threads(options.threads, options.n_traj), options.seed, trajectory,
                finals);
    out.mc = summarize(finals, options.t_total);
    return out;
}

}  // namespace icct
