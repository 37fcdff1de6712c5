#include "wristmood/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>

#include "numfmt.hpp"
#include "parallel.hpp"
#include "wristmood/random.hpp"

namespace wristmood::synth {

ProfileTable default_profiles(double separability) {
  if (!(separability >= 0.0)) fail(ErrorCode::kInvalidArgument, "separability must be >= 0");
  const MoodProfile base;
  ProfileTable t;
  t.fill(base);
  const double s = separability;
  for (std::size_t k = 0; k < 8; ++k) {
    const double theta = static_cast<double>(k) * std::numbers::pi / 4.0;
    const double aro = std::sin(theta), val = std::cos(theta);
    auto& p = t[k];
    p.hr_baseline = base.hr_baseline + s * (18.0 * aro + 6.0 * val);
    p.eda_tonic = std::max(0.2, base.eda_tonic + s * (1.0 * aro + 0.3 * val));
    p.scr_rate = std::max(0.0, base.scr_rate + s * 1.5 * aro);
    p.scr_amplitude = std::max(0.05, base.scr_amplitude + s * 0.1 * aro);
    p.acc_activity = std::max(0.5, base.acc_activity + s * 3.0 * aro);
    p.temp_mean = base.temp_mean + s * (0.6 * val - 0.2 * aro);
  }
  return t;
}

namespace {

double round_to(double v, double step) { return std::round(v / step) * step; }

std::vector<std::pair<int, int>> likert_pairs(MoodLabel mood) {
  std::vector<std::pair<int, int>> out;
  for (int h = kLikertMin; h <= kLikertMax; ++h)
    for (int a = kLikertMin; a <= kLikertMax; ++a)
      if (mood_from_likert(h, a) == mood) out.emplace_back(h, a);
  return out;
}

std::vector<MoodLabel> state_sequence(const SynthOptions& o, std::mt19937_64& rng) {
  std::vector<MoodLabel> seq;
  const auto& pal = o.palette;
  if (o.markov_stay) {
    std::uniform_int_distribution<std::size_t> pick(0, pal.size() - 1);
    std::bernoulli_distribution stay(*o.markov_stay);
    std::size_t cur = pick(rng);
    for (int k = 0; k < o.prompts_per_day; ++k) {
      if (k > 0 && !stay(rng) && pal.size() > 1) {
        std::uniform_int_distribution<std::size_t> other(0, pal.size() - 2);
        const std::size_t next = other(rng);
        cur = next >= cur ? next + 1 : next;
      }
      seq.push_back(pal[cur]);
    }
    return seq;
  }
  std::vector<MoodLabel> round;
  while (seq.size() < static_cast<std::size_t>(o.prompts_per_day)) {
    if (round.empty()) {
      round = pal;
      std::shuffle(round.begin(), round.end(), rng);
    }
    seq.push_back(round.back());
    round.pop_back();
  }
  return seq;
}

// Stream ids keep every channel's noise independent of the others.
enum Stream : std::uint64_t { kPlan = 0, kHr, kEda, kTemp, kAcc };

}  // namespace

SynthDay generate_day(const SynthOptions& o, int day_index, std::uint64_t seed) {
  if (o.prompts_per_day < 1 || !(o.slot_minutes > 0.0) || o.lead_in_minutes < 0.0)
    fail(ErrorCode::kInvalidArgument, "zero-length synthetic day");
  if (o.palette.empty()) fail(ErrorCode::kInvalidArgument, "empty mood palette");
  const auto profiles = default_profiles(o.separability);
  auto stream = [&](Stream s) {
    return make_rng(seed, (static_cast<std::uint64_t>(day_index) + 1) * 16 + s);
  };

  SynthDay day;
  const double t0 = o.day_start_unix + 86400.0 * day_index;
  const double lead = o.lead_in_minutes * 60.0;
  const double slot = o.slot_minutes * 60.0;
  const double total = lead + slot * o.prompts_per_day;

  auto plan = stream(kPlan);
  const auto states = state_sequence(o, plan);
  if (lead > 0.0) day.truth.push_back({t0, t0 + lead, MoodLabel::kNeutral});
  std::uniform_int_distribution<std::int64_t> delay(
      0, static_cast<std::int64_t>(std::llround(o.max_delay_minutes * 60.0)));
  for (int k = 0; k < o.prompts_per_day; ++k) {
    const double s0 = t0 + lead + slot * k;
    day.truth.push_back({s0, s0 + slot, states[k]});
    EmaEntry e;
    e.scheduled_at = std::llround(s0 + 0.5 * slot - 0.5 * o.max_delay_minutes * 60.0);
    e.answered_at = e.scheduled_at + delay(plan);
    const auto pairs = likert_pairs(states[k]);
    std::uniform_int_distribution<std::size_t> pick(0, pairs.size() - 1);
    std::tie(e.happiness, e.activeness) = pairs[pick(plan)];
    day.emas.push_back(e);
  }

  auto state_at = [&](double t) {
    const double rel = t - t0 - lead;
    if (rel < 0.0) return MoodLabel::kNeutral;
    const auto k = std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(rel / slot),
                                            o.prompts_per_day - 1);
    return states[static_cast<std::size_t>(k)];
  };
  auto profile_at = [&](double t) -> const MoodProfile& {
    return profiles[static_cast<std::size_t>(state_at(t))];
  };
  std::normal_distribution<double> gauss(0.0, 1.0);

  auto& rec = day.recording;
  rec.session_id = "day_" + std::to_string(day_index + 1);

  {  // HR, 1 Hz, starting 10 s after the raw sensors
    auto rng = stream(kHr);
    ChannelSeries hr{ChannelKind::kHr, t0 + 10.0, 1.0, {}};
    const auto n = static_cast<std::size_t>(std::llround(total - 10.0));
    const double phi = 0.8, innov = std::sqrt(1.0 - phi * phi);
    double e = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& p = profile_at(hr.start_time + static_cast<double>(i));
      e = phi * e + innov * gauss(rng);
      hr.samples.push_back(round_to(p.hr_baseline + p.hr_sd * e, 0.01));
    }
    rec.channels[ChannelKind::kHr] = std::move(hr);
  }
  {  // EDA, 4 Hz: lagged tonic level plus SCR bumps at Poisson times
    auto rng = stream(kEda);
    const double rate = 4.0;
    const auto n = static_cast<std::size_t>(std::llround(total * rate));
    std::vector<double> phasic(n, 0.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& p = profile_at(t0 + static_cast<double>(i) / rate);
      if (unit(rng) >= p.scr_rate / 60.0 / rate) continue;
      const double amp = p.scr_amplitude * (0.5 + unit(rng));
      for (std::size_t j = 0; j < static_cast<std::size_t>(30 * rate) && i + j < n; ++j) {
        const double t = static_cast<double>(j) / rate;
        phasic[i + j] += t < 1.0 ? amp * t : amp * std::exp(-(t - 1.0) / 4.0);
      }
    }
    ChannelSeries eda{ChannelKind::kEda, t0, rate, {}};
    double tonic = profiles[static_cast<std::size_t>(MoodLabel::kNeutral)].eda_tonic;
    double drift = 0.0;
    const double alpha = 1.0 - std::exp(-1.0 / (60.0 * rate));
    for (std::size_t i = 0; i < n; ++i) {
      const auto& p = profile_at(t0 + static_cast<double>(i) / rate);
      tonic += alpha * (p.eda_tonic - tonic);
      drift = 0.999 * drift + 0.002 * gauss(rng);
      const double v = tonic + drift + phasic[i] + 0.005 * gauss(rng);
      eda.samples.push_back(round_to(std::max(0.01, v), 1e-4));
    }
    rec.channels[ChannelKind::kEda] = std::move(eda);
  }
  {  // Temp, 4 Hz, first-order lag towards the state mean
    auto rng = stream(kTemp);
    const double rate = 4.0;
    const auto n = static_cast<std::size_t>(std::llround(total * rate));
    ChannelSeries temp{ChannelKind::kTemp, t0, rate, {}};
    double level = profiles[static_cast<std::size_t>(MoodLabel::kNeutral)].temp_mean;
    const double alpha = 1.0 - std::exp(-1.0 / (300.0 * rate));
    for (std::size_t i = 0; i < n; ++i) {
      const auto& p = profile_at(t0 + static_cast<double>(i) / rate);
      level += alpha * (p.temp_mean - level);
      temp.samples.push_back(round_to(level + 0.01 * gauss(rng), 1e-3));
    }
    rec.channels[ChannelKind::kTemp] = std::move(temp);
  }
  {  // ACC, 32 Hz raw 1/64 g: gravity on z plus AR(1) movement per axis
    auto rng = stream(kAcc);
    const double rate = 32.0;
    const auto n = static_cast<std::size_t>(std::llround(total * rate));
    ChannelSeries ax{ChannelKind::kAccX, t0, rate, {}}, ay = ax, az = ax;
    ay.kind = ChannelKind::kAccY;
    az.kind = ChannelKind::kAccZ;
    const double phi = 0.9, innov = std::sqrt(1.0 - phi * phi);
    double ex = 0.0, ey = 0.0, ez = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double a = profile_at(t0 + static_cast<double>(i) / rate).acc_activity;
      ex = phi * ex + innov * gauss(rng);
      ey = phi * ey + innov * gauss(rng);
      ez = phi * ez + innov * gauss(rng);
      ax.samples.push_back(std::round(a * ex));
      ay.samples.push_back(std::round(a * ey));
      az.samples.push_back(std::round(64.0 + a * ez));
    }
    rec.channels[ChannelKind::kAccX] = std::move(ax);
    rec.channels[ChannelKind::kAccY] = std::move(ay);
    rec.channels[ChannelKind::kAccZ] = std::move(az);
  }
  return day;
}

SynthStudy generate_study(const std::filesystem::path& root, int days, const SynthOptions& options,
                          std::uint64_t seed) {
  if (days < 1) fail(ErrorCode::kInvalidArgument, "need at least one day");
  SynthStudy study;
  study.days.resize(static_cast<std::size_t>(days));
  detail::parallel_for(study.days.size(), [&](std::size_t d) {
    study.days[d] = generate_day(options, static_cast<int>(d), seed);
  });
  std::error_code ec;
  std::filesystem::create_directories(root, ec);
  if (ec) fail(ErrorCode::kIo, "cannot create " + root.string() + ": " + ec.message());
  std::vector<EmaEntry> emas;
  std::ofstream truth(root / "truth.csv", std::ios::binary | std::ios::trunc);
  if (!truth) fail(ErrorCode::kIo, "cannot write " + (root / "truth.csv").string());
  truth << "day,start,end,mood\n";
  for (std::size_t d = 0; d < study.days.size(); ++d) {
    char name[32];
    std::snprintf(name, sizeof name, "day_%02zu", d + 1);
    write_session(root / name, study.days[d].recording);
    emas.insert(emas.end(), study.days[d].emas.begin(), study.days[d].emas.end());
    for (const auto& s : study.days[d].truth)
      truth << name << ',' << detail::format_number(s.start) << ',' << detail::format_number(s.end)
            << ',' << to_string(s.mood) << '\n';
  }
  if (!truth) fail(ErrorCode::kIo, "write error on truth.csv");
  write_ema_log(root / "ema.ndjson", emas);
  return study;
}

}  // namespace wristmood::synth
