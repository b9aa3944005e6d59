#include "crsma/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "crsma/errors.hpp"

namespace crsma {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

void require_positive(double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw InvalidConfiguration(std::string(name) + " must be finite and > 0, got " +
                                   std::to_string(value));
    }
}

}  // namespace

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

SystemConfig::SystemConfig(std::size_t num_gfus, double power_gbu, double power_gfu,
                           double target_rate_gbu, double target_rate_gfu)
    : num_gfus_(num_gfus),
      power_gbu_(power_gbu),
      power_gfu_(power_gfu),
      target_rate_gbu_(target_rate_gbu),
      target_rate_gfu_(target_rate_gfu),
      eps0_(std::exp2(target_rate_gbu) - 1.0),
      eps_s_(std::exp2(target_rate_gfu) - 1.0),
      eta0_(eps0_ / power_gbu),
      eta_s_(eps_s_ / power_gfu) {}

SystemConfig SystemConfig::make(std::size_t num_gfus, double power_gbu, double power_gfu,
                                double target_rate_gbu, double target_rate_gfu) {
    if (num_gfus == 0) {
        throw InvalidConfiguration("number of grant-free users must be >= 1");
    }
    require_positive(power_gbu, "power_gbu");
    require_positive(power_gfu, "power_gfu");
    require_positive(target_rate_gbu, "target_rate_gbu");
    require_positive(target_rate_gfu, "target_rate_gfu");
    return SystemConfig(num_gfus, power_gbu, power_gfu, target_rate_gbu, target_rate_gfu);
}

SystemConfig SystemConfig::from_db(std::size_t num_gfus, double power_gbu_db, double power_gfu_db,
                                   double target_rate_gbu, double target_rate_gfu) {
    return make(num_gfus, db_to_linear(power_gbu_db), db_to_linear(power_gfu_db),
                target_rate_gbu, target_rate_gfu);
}

SystemConfig SystemConfig::with_num_gfus(std::size_t num_gfus) const {
    return make(num_gfus, power_gbu_, power_gfu_, target_rate_gbu_, target_rate_gfu_);
}

SystemConfig SystemConfig::with_powers(double power_gbu, double power_gfu) const {
    return make(num_gfus_, power_gbu, power_gfu, target_rate_gbu_, target_rate_gfu_);
}

SystemConfig SystemConfig::with_target_rates(double target_rate_gbu,
                                             double target_rate_gfu) const {
    return make(num_gfus_, power_gbu_, power_gfu_, target_rate_gbu, target_rate_gfu);
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream) noexcept
    : state_(mix64(seed + kGolden) ^ mix64((stream + 1) * 0xD1B54A32D192ED03ULL)) {}

RandomStream::result_type RandomStream::operator()() noexcept {
    state_ += kGolden;
    return mix64(state_);
}

double RandomStream::uniform() noexcept {
    // 53 random bits mapped to {1, ..., 2^53} / 2^53, so u = 0 cannot occur.
    return static_cast<double>(((*this)() >> 11) + 1) * 0x1.0p-53;
}

double RandomStream::exponential() noexcept { return -std::log(uniform()); }

void ChannelRealization::validate() const {
    if (gains_gfu.empty()) {
        throw InvalidArgument("channel realization has no grant-free users");
    }
    if (!(gain_gbu >= 0.0)) {
        throw InvalidArgument("GBU channel gain must be >= 0");
    }
    if (!(gains_gfu.front() >= 0.0) || !std::is_sorted(gains_gfu.begin(), gains_gfu.end())) {
        throw InvalidArgument("GFU channel gains must be non-negative and ascending");
    }
    if (admitted_user >= gains_gfu.size()) {
        throw InvalidArgument("admitted user index out of range");
    }
}

void sample_channel_realization_into(std::size_t num_gfus, RandomStream& rng,
                                     ChannelRealization& out) {
    if (num_gfus == 0) {
        throw InvalidConfiguration("number of grant-free users must be >= 1");
    }
    out.gain_gbu = rng.exponential();
    out.gains_gfu.resize(num_gfus);
    std::size_t best = 0;
    for (std::size_t i = 0; i < num_gfus; ++i) {
        out.gains_gfu[i] = rng.exponential();
        // ">=" keeps the last of equal maxima, which is where a stable sort puts it.
        if (out.gains_gfu[i] >= out.gains_gfu[best]) {
            best = i;
        }
    }
    out.admitted_user = best;
    std::sort(out.gains_gfu.begin(), out.gains_gfu.end());
}

ChannelRealization sample_channel_realization(std::size_t num_gfus, RandomStream& rng) {
    ChannelRealization out;
    sample_channel_realization_into(num_gfus, rng, out);
    return out;
}

SinrTriplet sinr_triplet(const SystemConfig& config, double gain_gbu, double gain_gfu,
                         double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw DomainError("power split alpha must lie in [0, 1], got " + std::to_string(alpha));
    }
    if (!(gain_gbu >= 0.0) || !(gain_gfu >= 0.0)) {
        throw DomainError("channel gains must be >= 0");
    }
    const double gbu_rx = config.power_gbu() * gain_gbu;
    const double gfu_rx = config.power_gfu() * gain_gfu;
    const double residual = (1.0 - alpha) * gfu_rx;
    return SinrTriplet{
        .gfu_stream1 = alpha * gfu_rx / (gbu_rx + residual + 1.0),
        .gbu = gbu_rx / (residual + 1.0),
        .gfu_stream2 = residual,
    };
}

double rate_from_sinr(double sinr) {
    if (!(sinr >= 0.0)) {
        throw DomainError("SINR must be >= 0");
    }
    return std::log1p(sinr) / std::numbers::ln2;
}

RateTriplet achievable_rates(const SinrTriplet& sinr) {
    return RateTriplet{
        .gfu_stream1 = rate_from_sinr(sinr.gfu_stream1),
        .gbu = rate_from_sinr(sinr.gbu),
        .gfu_stream2 = rate_from_sinr(sinr.gfu_stream2),
    };
}

}  // namespace crsma
