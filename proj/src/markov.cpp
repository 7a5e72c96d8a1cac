#include "momentfield/markov.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <mutex>

#include "momentfield/errors.hpp"
#include "momentfield/model.hpp"
#include "momentfield/parallel.hpp"

namespace mf {

TransitionRates transition_rates(const MarkovState& s, const NetworkConfig& net) {
    if (!net.discrete()) throw ConfigError("Markov simulation needs discrete sizes N_i");
    if (s.n.size() != net.M) throw ConfigError("MarkovState has wrong length");
    const int M = net.M;
    TransitionRates r;
    r.down.resize(M);
    r.up.resize(M);
    Eigen::VectorXd p(M);
    for (int i = 0; i < M; ++i) {
        if (s.n[i] < 0 || s.n[i] > static_cast<int>(net.sizes[i]))
            throw EvalError("MarkovState outside [0, N_i]");
        p[i] = s.n[i] / net.sizes[i];
    }
    const Eigen::VectorXd cur = total_current(p, net);
    for (int i = 0; i < M; ++i) {
        r.down[i] = net.alpha[i] * s.n[i];
        const double f = net.f(i).value(cur[i]);
        if (f < 0)
            throw EvalError("negative up-rate from activation at population " +
                            std::to_string(i + 1));
        const double scale =
            net.per_quiescent_up_rate ? (net.sizes[i] - s.n[i]) : net.sizes[i];
        r.up[i] = s.n[i] >= static_cast<int>(net.sizes[i]) ? 0.0 : scale * f;
    }
    return r;
}

GillespieEvent gillespie_step(MarkovState& s, const NetworkConfig& net, RngStream& rng) {
    const TransitionRates r = transition_rates(s, net);
    const double Q = r.total();
    GillespieEvent ev;
    if (Q <= 0.0) {
        ev.absorbing = true;
        return ev;
    }
    ev.dt = rng.exponential(Q);
    // categorical channel choice: down channels first, then up channels
    double u = rng.uniform() * Q;
    const int M = net.M;
    int pop = -1, sign = 0;
    for (int i = 0; i < M && pop < 0; ++i) {
        if (u < r.down[i]) {
            pop = i;
            sign = -1;
        } else {
            u -= r.down[i];
        }
    }
    for (int i = 0; i < M && pop < 0; ++i) {
        if (u < r.up[i]) {
            pop = i;
            sign = +1;
        } else {
            u -= r.up[i];
        }
    }
    if (pop < 0) {  // rounding residue: take the largest-rate channel
        double best = -1.0;
        for (int i = 0; i < M; ++i) {
            if (r.down[i] > best) {
                best = r.down[i];
                pop = i;
                sign = -1;
            }
            if (r.up[i] > best) {
                best = r.up[i];
                pop = i;
                sign = +1;
            }
        }
    }
    ev.population = pop;
    ev.sign = sign;
    s.n[pop] += sign;
    s.t += ev.dt;
    return ev;
}

void EnsembleStats::write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open '" + path + "' for writing");
    const int M = static_cast<int>(mean.cols());
    out << "t";
    for (int i = 1; i <= M; ++i) out << ",nu_" << i;
    for (int i = 1; i <= M; ++i)
        for (int j = i; j <= M; ++j) out << ",C_" << i << j;
    out << "\n";
    out.precision(17);
    for (std::size_t k = 0; k < times.size(); ++k) {
        out << times[k];
        for (int i = 0; i < M; ++i) out << "," << mean(k, i);
        for (int i = 0; i < M; ++i)
            for (int j = i; j < M; ++j) out << "," << second[k](i, j);
        out << "\n";
    }
}

EnsembleStats run_ensemble(const NetworkConfig& net, const Eigen::VectorXi& init, double t_end,
                           long paths, std::uint64_t seed, int grid_points, int workers,
                           const EventLog* log) {
    if (paths < 1) throw ConfigError("paths must be >= 1");
    if (!net.discrete()) throw ConfigError("Markov simulation needs discrete sizes N_i");
    const int M = net.M;
    const int G = grid_points;
    std::vector<double> grid(G);
    for (int k = 0; k < G; ++k) grid[k] = t_end * k / (G - 1);

    // fixed 16-path accumulation chunks keep the merge order independent of
    // the worker count
    const long chunk = 16;
    const long nchunks = (paths + chunk - 1) / chunk;
    std::vector<Eigen::MatrixXd> sum_nu(nchunks, Eigen::MatrixXd::Zero(G, M));
    std::vector<std::vector<Eigen::MatrixXd>> sum_cc(
        nchunks, std::vector<Eigen::MatrixXd>(G, Eigen::MatrixXd::Zero(M, M)));

    std::ofstream logf;
    std::mutex logmtx;
    if (log) {
        logf.open(log->path, std::ios::binary);
        if (!logf) throw ConfigError("cannot open event log '" + log->path + "'");
    }

    parallel_chunks(paths, chunk, workers, [&](long p0, long p1) {
        const long ci = p0 / chunk;
        Eigen::VectorXd nu(M);
        std::vector<char> logbuf;
        for (long p = p0; p < p1; ++p) {
            RngStream rng(seed, static_cast<std::uint64_t>(p));
            MarkovState s{init, 0.0};
            int gi = 0;
            Eigen::VectorXi n_before = s.n;
            // fill grid points in [s.t, t_event) with the pre-event state
            const auto fill_before = [&](double t_event) {
                for (int i = 0; i < M; ++i) nu[i] = n_before[i] / net.sizes[i];
                while (gi < G && grid[gi] < t_event) {
                    sum_nu[ci].row(gi) += nu.transpose();
                    sum_cc[ci][gi] += nu * nu.transpose();
                    ++gi;
                }
            };
            while (gi < G) {
                n_before = s.n;
                GillespieEvent ev = gillespie_step(s, net, rng);
                if (ev.absorbing) break;
                fill_before(s.t);
                if (log) {
                    const double tt = s.t;
                    const std::uint16_t pop = static_cast<std::uint16_t>(ev.population);
                    const std::int8_t sg = static_cast<std::int8_t>(ev.sign);
                    char rec[11];
                    std::memcpy(rec, &tt, 8);
                    std::memcpy(rec + 8, &pop, 2);
                    std::memcpy(rec + 10, &sg, 1);
                    logbuf.insert(logbuf.end(), rec, rec + 11);
                }
                if (s.t > t_end) break;
            }
            // tail (or absorbing state): current state holds through t_end
            n_before = s.n;
            fill_before(t_end + 1.0);
        }
        if (log && !logbuf.empty()) {
            std::lock_guard<std::mutex> lk(logmtx);
            logf.write(logbuf.data(), static_cast<std::streamsize>(logbuf.size()));
        }
    });

    EnsembleStats stats;
    stats.times = grid;
    stats.paths = paths;
    stats.seed = seed;
    stats.mean = Eigen::MatrixXd::Zero(G, M);
    stats.second.assign(G, Eigen::MatrixXd::Zero(M, M));
    for (long c = 0; c < nchunks; ++c) {
        stats.mean += sum_nu[c];
        for (int k = 0; k < G; ++k) stats.second[k] += sum_cc[c][k];
    }
    stats.mean /= static_cast<double>(paths);
    for (int k = 0; k < G; ++k) stats.second[k] /= static_cast<double>(paths);
    return stats;
}

}  // namespace mf
