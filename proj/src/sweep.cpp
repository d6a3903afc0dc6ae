// SPDX-License-Identifier: Apache-2.0
#include "risfocus/sweep.hpp"
#include "risfocus/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <thread>

namespace risfocus {

GridSpec GridSpec::measurement_table(bool points_compat)
{
    GridSpec g;
    if (points_compat)
        g.nx -= 1;
    return g;
}

void GridSpec::validate() const
{
    if (nx < 1 || ny < 1)
        throw ValidationError("grid: nx and ny must be >= 1");
    if (!(dx > 0.0) || !(dy > 0.0))
        throw ValidationError("grid: dx and dy must be > 0");
    if (!std::isfinite(x0) || !std::isfinite(y0) || !std::isfinite(z_plane) || !std::isfinite(dx) ||
        !std::isfinite(dy))
        throw ValidationError("grid: coordinates must be finite");
}

namespace {

// Runs fn(i) for every x-row. Each row writes only its own cells.
template <typename Fn>
void for_each_row(int nx, unsigned threads, Fn &&fn)
{
    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(nx));
    if (threads <= 1)
    {
        for (int i = 0; i < nx; ++i)
            fn(i);
        return;
    }

    std::atomic<int> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                for (int i = next++; i < nx && !failed; i = next++)
                {
                    try
                    {
                        fn(i);
                    }
                    catch (...)
                    {
                        if (!failed.exchange(true))
                            error = std::current_exception();
                    }
                }
            });
    }
    if (error)
        std::rethrow_exception(error);
}

std::string cell_context(const GridSpec &grid, int i, int j)
{
    return " at grid cell (" + std::to_string(i) + ", " + std::to_string(j) + ") x=" + std::to_string(grid.x(i)) +
           " y=" + std::to_string(grid.y(j)) + " z=" + std::to_string(grid.z_plane);
}

} // namespace

PowerGrid sweep_power(const Scenario &scenario, const RisConfig &config, const GridSpec &grid, unsigned threads)
{
    grid.validate();
    PowerGrid out{grid, std::vector<double>(grid.size(), kBelowFloor), "sweep", fingerprint(scenario)};
    for_each_row(grid.nx, threads, [&](int i) {
        for (int j = 0; j < grid.ny; ++j)
        {
            try
            {
                out.at(i, j) = received_power(scenario, config, grid.point(i, j));
            }
            catch (const GeometryError &e)
            {
                throw GeometryError(e.what() + cell_context(grid, i, j));
            }
        }
    });
    return out;
}

void SounderParams::validate() const
{
    if (averages < 1)
        throw ValidationError("sounder: averages Q must be >= 1");
    if (n1 < 1 || n2 < n1)
        throw ValidationError("sounder: tap window requires 1 <= n1 <= n2");
    if (signal_tap < n1 || signal_tap > n2)
        throw ValidationError("sounder: signal tap must lie inside [n1, n2]");
    if (!(temperature_k > 0.0) || !(bandwidth_hz > 0.0))
        throw ValidationError("sounder: temperature and bandwidth must be > 0");
}

double SounderParams::floor_dbm() const
{
    return noise_floor(temperature_k, bandwidth_hz, averages, noise_figure_db);
}

double average_ir_power(std::span<const ImpulseResponse> records, int n1, int n2, double tx_power_dbm)
{
    if (records.empty())
        throw ValidationError("average_ir_power: no records");
    if (n1 < 0 || n2 < n1)
        throw ValidationError("average_ir_power: empty tap window");
    std::complex<double> sum{0.0, 0.0};
    for (const auto &record : records)
    {
        if (record.size() <= static_cast<std::size_t>(n2))
            throw ValidationError("average_ir_power: record shorter than tap window");
        for (int n = n1; n <= n2; ++n)
            sum += record[static_cast<std::size_t>(n)];
    }
    const double q = static_cast<double>(records.size());
    return mw_to_dbm(dbm_to_mw(tx_power_dbm) / q * std::norm(sum));
}

double tap_noise_variance(const SounderParams &sounder, double tx_power_dbm)
{
    // E[(P_BS/Q) |sum of W*Q noise taps|^2] = P_BS * W * sigma^2.
    const double window = static_cast<double>(sounder.n2 - sounder.n1 + 1);
    return dbm_to_mw(sounder.floor_dbm()) / (window * dbm_to_mw(tx_power_dbm));
}

std::uint64_t cell_seed(std::uint64_t rng_seed, int i, int j)
{
    // splitmix64 finalizer over the packed cell index
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    };
    const std::uint64_t cell = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(i)) << 32) |
                               static_cast<std::uint32_t>(j);
    return mix(mix(rng_seed) ^ cell);
}

std::vector<ImpulseResponse> synthesize_records(double received_mw, const SounderParams &sounder, double tx_power_dbm,
                                                std::uint64_t seed)
{
    const auto q = static_cast<std::size_t>(sounder.averages);
    const std::size_t taps = static_cast<std::size_t>(sounder.n2) + 1;
    const double amplitude = std::sqrt(received_mw / (dbm_to_mw(tx_power_dbm) * static_cast<double>(q)));

    std::vector<ImpulseResponse> records(q, ImpulseResponse(taps, {0.0, 0.0}));
    for (auto &r : records)
        r[static_cast<std::size_t>(sounder.signal_tap)] = {amplitude, 0.0};

    if (sounder.noise_enabled)
    {
        std::mt19937_64 rng(seed);
        const double sigma = std::sqrt(tap_noise_variance(sounder, tx_power_dbm) / 2.0);
        std::normal_distribution<double> normal(0.0, sigma);
        for (auto &r : records)
            for (auto &tap : r)
            {
                const double re = normal(rng);
                const double im = normal(rng);
                tap += std::complex<double>(re, im);
            }
    }
    return records;
}

PowerGrid emulate_measurement_grid(const Scenario &scenario, const RisConfig &config, const GridSpec &grid,
                                   const SounderParams &sounder, unsigned threads)
{
    grid.validate();
    sounder.validate();
    PowerGrid out{grid, std::vector<double>(grid.size(), kBelowFloor), "emulated", fingerprint(scenario)};
    for_each_row(grid.nx, threads, [&](int i) {
        for (int j = 0; j < grid.ny; ++j)
        {
            double received_mw = 0.0;
            try
            {
                received_mw = received_power_mw(scenario, config, grid.point(i, j));
            }
            catch (const GeometryError &e)
            {
                throw GeometryError(e.what() + cell_context(grid, i, j));
            }
            const auto records =
                synthesize_records(received_mw, sounder, scenario.tx_power_dbm, cell_seed(sounder.rng_seed, i, j));
            out.at(i, j) = average_ir_power(records, sounder.n1, sounder.n2, scenario.tx_power_dbm);
        }
    });
    return out;
}

Peak find_peak(const PowerGrid &grid)
{
    if (grid.values.empty())
        throw ValidationError("find_peak: empty grid");
    Peak best;
    bool found = false;
    for (int i = 0; i < grid.spec.nx; ++i)
        for (int j = 0; j < grid.spec.ny; ++j)
        {
            const double v = grid.at(i, j);
            if (is_below_floor(v))
                continue;
            if (!found || v > best.power_dbm)
            {
                best = {i, j, grid.spec.x(i), grid.spec.y(j), v};
                found = true;
            }
        }
    if (!found)
        throw NumericError("no peak: every cell is below floor");
    return best;
}

BeamCut beam_cut(const Scenario &scenario, const RisConfig &config, const SphericalCoord &target, BeamAxis axis,
                 double step_deg, double limit_deg)
{
    if (!(step_deg > 0.0) || !(limit_deg > 0.0))
        throw ValidationError("beam_cut: step and limit must be > 0");
    const int n = static_cast<int>(std::lround(limit_deg / step_deg));
    BeamCut cut;
    for (int k = -n; k <= n; ++k)
    {
        const double offset = k * step_deg;
        SphericalCoord s = target;
        if (axis == BeamAxis::azimuth)
        {
            s.azimuth_deg = std::remainder(target.azimuth_deg + offset, 360.0);
            if (s.azimuth_deg <= -180.0)
                s.azimuth_deg += 360.0;
        }
        else
        {
            s.elevation_deg = target.elevation_deg + offset;
            if (std::abs(s.elevation_deg) > 90.0)
                continue;
        }
        cut.offsets_deg.push_back(offset);
        cut.power_dbm.push_back(received_power(scenario, config, spherical_to_cartesian(s)));
    }
    return cut;
}

double hpbw(const BeamCut &cut)
{
    const auto it = std::find(cut.offsets_deg.begin(), cut.offsets_deg.end(), 0.0);
    if (it == cut.offsets_deg.end())
        throw ValidationError("hpbw: cut does not contain the target");
    const auto center = static_cast<std::size_t>(it - cut.offsets_deg.begin());
    const double ref = cut.power_dbm[center];
    if (is_below_floor(ref))
        throw NumericError("beam not resolved: target is below floor");
    const double threshold = ref - 3.0;

    auto crossing = [&](int dir) -> double {
        auto k = static_cast<std::ptrdiff_t>(center);
        const auto size = static_cast<std::ptrdiff_t>(cut.offsets_deg.size());
        while (true)
        {
            const std::ptrdiff_t next = k + dir;
            if (next < 0 || next >= size)
                throw NumericError("beam not resolved: no -3 dB crossing within the cut");
            const double p = cut.power_dbm[static_cast<std::size_t>(next)];
            if (p < threshold)
            {
                const double o1 = cut.offsets_deg[static_cast<std::size_t>(k)];
                const double o2 = cut.offsets_deg[static_cast<std::size_t>(next)];
                if (is_below_floor(p))
                    return o2;
                const double p1 = cut.power_dbm[static_cast<std::size_t>(k)];
                return o1 + (threshold - p1) / (p - p1) * (o2 - o1);
            }
            k = next;
        }
    };
    return crossing(+1) - crossing(-1);
}

double hpbw(const Scenario &scenario, const RisConfig &config, const SphericalCoord &target, BeamAxis axis)
{
    return hpbw(beam_cut(scenario, config, target, axis));
}

GridComparison compare_grids(const PowerGrid &a, const PowerGrid &b, double threshold_dbm)
{
    if (!(a.spec == b.spec))
        throw ValidationError("compare_grids: grid specs differ");
    if (a.values.size() != b.values.size() || a.values.size() != a.spec.size())
        throw ValidationError("compare_grids: value count does not match grid spec");

    GridComparison out;
    out.threshold_dbm = threshold_dbm;
    const Peak pa = find_peak(a);
    const Peak pb = find_peak(b);
    out.peak_offset_m = std::hypot(pa.x - pb.x, pa.y - pb.y);
    out.peak_delta_db = pb.power_dbm - pa.power_dbm;

    double sum_sq = 0.0;
    for (std::size_t k = 0; k < a.values.size(); ++k)
    {
        const double va = a.values[k];
        const double vb = b.values[k];
        if (is_below_floor(va) || is_below_floor(vb) || va < threshold_dbm || vb < threshold_dbm)
            continue;
        sum_sq += (vb - va) * (vb - va);
        ++out.cells_compared;
    }
    out.rmse_db = out.cells_compared ? std::sqrt(sum_sq / static_cast<double>(out.cells_compared)) : 0.0;
    return out;
}

} // namespace risfocus
