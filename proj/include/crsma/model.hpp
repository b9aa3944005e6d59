#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

namespace crsma {

/// Converts a power ratio in dB to linear scale.
double db_to_linear(double db);

/// System parameters for one GBU and K grant-free users.
///
/// Powers are transmit-power-to-noise ratios (noise variance is 1), target
/// rates are in bits per channel use. The SNR thresholds eps = 2^R - 1 and
/// gain thresholds eta = eps / P are derived once at construction.
class SystemConfig {
public:
    static SystemConfig make(std::size_t num_gfus, double power_gbu, double power_gfu,
                             double target_rate_gbu, double target_rate_gfu);

    /// Same as make() but with both powers given in dB.
    static SystemConfig from_db(std::size_t num_gfus, double power_gbu_db, double power_gfu_db,
                                double target_rate_gbu, double target_rate_gfu);

    std::size_t num_gfus() const noexcept { return num_gfus_; }
    double power_gbu() const noexcept { return power_gbu_; }
    double power_gfu() const noexcept { return power_gfu_; }
    double target_rate_gbu() const noexcept { return target_rate_gbu_; }
    double target_rate_gfu() const noexcept { return target_rate_gfu_; }

    double eps0() const noexcept { return eps0_; }
    double eps_s() const noexcept { return eps_s_; }
    double eta0() const noexcept { return eta0_; }
    double eta_s() const noexcept { return eta_s_; }

    SystemConfig with_num_gfus(std::size_t num_gfus) const;
    SystemConfig with_powers(double power_gbu, double power_gfu) const;
    SystemConfig with_target_rates(double target_rate_gbu, double target_rate_gfu) const;

    friend bool operator==(const SystemConfig&, const SystemConfig&) = default;

private:
    SystemConfig(std::size_t num_gfus, double power_gbu, double power_gfu, double target_rate_gbu,
                 double target_rate_gfu);

    std::size_t num_gfus_;
    double power_gbu_;
    double power_gfu_;
    double target_rate_gbu_;
    double target_rate_gfu_;
    double eps0_;
    double eps_s_;
    double eta0_;
    double eta_s_;
};

/// Counter-keyed random stream.
///
/// The state is a SplitMix64 Weyl sequence whose starting point is a hash of
/// (seed, stream). Monte Carlo trial i uses stream i, so results do not depend
/// on how trials are partitioned between workers.
class RandomStream {
public:
    using result_type = std::uint64_t;

    explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0) noexcept;

    result_type operator()() noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    /// Uniform on (0, 1]; never returns 0.
    double uniform() noexcept;

    /// Unit-mean exponential variate by inversion.
    double exponential() noexcept;

private:
    std::uint64_t state_;
};

/// Channel power gains of one transmission block.
struct ChannelRealization {
    double gain_gbu = 0.0;
    /// |h_1|^2 <= ... <= |h_K|^2.
    std::vector<double> gains_gfu;
    /// Unsorted index of the user holding the largest gain (the admitted GFU).
    std::size_t admitted_user = 0;

    std::size_t num_gfus() const noexcept { return gains_gfu.size(); }
    double best_gain() const { return gains_gfu.back(); }

    /// Throws InvalidArgument unless the gains are non-negative and ascending.
    void validate() const;
};

ChannelRealization sample_channel_realization(std::size_t num_gfus, RandomStream& rng);

/// Allocation-free variant for hot loops; reuses the storage of `out`.
void sample_channel_realization_into(std::size_t num_gfus, RandomStream& rng,
                                     ChannelRealization& out);

/// SINRs along the SIC chain x_{K,1} -> x_0 -> x_{K,2}.
struct SinrTriplet {
    double gfu_stream1 = 0.0;
    double gbu = 0.0;
    double gfu_stream2 = 0.0;
};

struct RateTriplet {
    double gfu_stream1 = 0.0;
    double gbu = 0.0;
    double gfu_stream2 = 0.0;

    double gfu_total() const noexcept { return gfu_stream1 + gfu_stream2; }
};

SinrTriplet sinr_triplet(const SystemConfig& config, double gain_gbu, double gain_gfu,
                         double alpha);

RateTriplet achievable_rates(const SinrTriplet& sinr);

/// log2(1 + sinr); throws DomainError for negative input.
double rate_from_sinr(double sinr);

}  // namespace crsma
