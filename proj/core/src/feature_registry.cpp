#include "wristmood/features.hpp"

namespace wristmood {

std::string_view to_string(ChannelGroup group) {
  switch (group) {
    case ChannelGroup::kAcc: return "acc";
    case ChannelGroup::kTemp: return "temp";
    case ChannelGroup::kHr: return "hr";
    case ChannelGroup::kEda: return "eda";
  }
  return "?";
}

std::string_view to_string(SignalId signal) {
  switch (signal) {
    case SignalId::kAccX: return "acc_x";
    case SignalId::kAccY: return "acc_y";
    case SignalId::kAccZ: return "acc_z";
    case SignalId::kAccNorm: return "acc_norm";
    case SignalId::kTemp: return "temp";
    case SignalId::kHr: return "hr";
    case SignalId::kEda: return "eda";
    case SignalId::kScl: return "scl";
    case SignalId::kScr: return "scr";
  }
  return "?";
}

ChannelGroup group_of(SignalId signal) {
  switch (signal) {
    case SignalId::kAccX:
    case SignalId::kAccY:
    case SignalId::kAccZ:
    case SignalId::kAccNorm: return ChannelGroup::kAcc;
    case SignalId::kTemp: return ChannelGroup::kTemp;
    case SignalId::kHr: return ChannelGroup::kHr;
    default: return ChannelGroup::kEda;
  }
}

std::string_view to_string(Stat stat) {
  switch (stat) {
    case Stat::kMax: return "MAX";
    case Stat::kMin: return "MIN";
    case Stat::kMean: return "MEAN";
    case Stat::kAmp: return "AMP";
    case Stat::kDr: return "DR";
    case Stat::kVar: return "VAR";
    case Stat::kStd: return "STD";
    case Stat::kRms: return "RMS";
    case Stat::kP90: return "P90";
    case Stat::kMad: return "MAD";
    case Stat::kNorm: return "NORM";
    case Stat::kMavfd: return "MAVFD";
    case Stat::kMavfdn: return "MAVFDN";
    case Stat::kMavsd: return "MAVSD";
    case Stat::kMavsdn: return "MAVSDN";
    case Stat::kFdm: return "FDM";
    case Stat::kFdstd: return "FDSTD";
    case Stat::kSdm: return "SDM";
    case Stat::kSdstd: return "SDSTD";
    case Stat::kAl: return "AL";
    case Stat::kIntegral: return "I";
    case Stat::kNap: return "NAP";
    case Stat::kNrms: return "NRMS";
    case Stat::kApr: return "APR";
    case Stat::kEpr: return "EPR";
    case Stat::kCm: return "CM";
    case Stat::kSkew: return "SKEW";
    case Stat::kKurt: return "KURT";
    case Stat::kSrl: return "SRL";
    case Stat::kIrl: return "IRL";
    case Stat::kSm: return "SM";
    case Stat::kMfd: return "MFD";
    case Stat::kSmfd: return "SMFD";
    case Stat::kPsdMean: return "PSD_MEAN";
    case Stat::kPsdStd: return "PSD_STD";
    case Stat::kP25: return "P25";
    case Stat::kP50: return "P50";
    case Stat::kP75: return "P75";
    case Stat::kBp01to02: return "BP_0.1_0.2";
    case Stat::kBp02to03: return "BP_0.2_0.3";
    case Stat::kBp03to04: return "BP_0.3_0.4";
    case Stat::kAvlf: return "aVLF";
    case Stat::kAlf: return "aLF";
    case Stat::kAhf: return "aHF";
    case Stat::kAtotal: return "aTotal";
    case Stat::kPvlf: return "pVLF";
    case Stat::kPlf: return "pLF";
    case Stat::kPhf: return "pHF";
    case Stat::kNlf: return "nLF";
    case Stat::kNhf: return "nHF";
    case Stat::kLfhf: return "LFHF";
    case Stat::kPeakVlf: return "peakVLF";
    case Stat::kPeakLf: return "peakLF";
    case Stat::kPeakHf: return "peakHF";
  }
  return "?";
}

Domain domain_of(Stat stat) {
  return static_cast<int>(stat) >= static_cast<int>(Stat::kPsdMean) ? Domain::kFrequency
                                                                     : Domain::kTime;
}

namespace {

using enum Stat;

const std::vector<Stat> kAccTime = {kMax, kP90, kVar, kMad, kNorm, kAmp, kMin,
                                    kStd, kRms, kMavfd, kMavfdn, kMavsd, kMavsdn};
const std::vector<Stat> kGenericFreq = {kPsdMean, kPsdStd, kP25, kP50, kP75};
const std::vector<Stat> kTempTime = {kMean, kSrl, kIrl, kStd, kMavfd, kMavfdn, kMavsd, kMavsdn};
const std::vector<Stat> kHrTime = {kMax, kP90, kVar, kMad, kNorm, kMean, kMin,
                                   kStd, kMavfd, kMavfdn, kMavsd, kMavsdn, kSm, kMfd};
const std::vector<Stat> kHrFreq = {kAvlf, kAlf, kAhf, kAtotal, kPvlf, kPlf, kPhf,
                                   kNlf, kNhf, kLfhf, kPeakVlf, kPeakLf, kPeakHf};
const std::vector<Stat> kEdaFamilyTime = {kMean, kStd, kMax, kMin, kDr, kFdm, kFdstd, kSdm,
                                          kSdstd, kAl, kIntegral, kNap, kNrms, kApr, kEpr,
                                          kCm, kSkew, kKurt, kMavfd, kMavfdn, kMavsd, kMavsdn};
const std::vector<Stat> kEdaFamilyFreq = {kPsdMean, kPsdStd, kP25, kP50,
                                          kP75, kBp01to02, kBp02to03, kBp03to04};

}  // namespace

FeatureRegistry::FeatureRegistry() {
  auto add = [this](SignalId sig, const std::vector<Stat>& stats) {
    for (Stat s : stats) {
      FeatureInfo info;
      info.index = features_.size();
      info.group = group_of(sig);
      info.signal = sig;
      info.stat = s;
      info.domain = domain_of(s);
      info.name = std::string(to_string(sig)) + "." + std::string(to_string(s));
      features_.push_back(std::move(info));
    }
  };
  for (SignalId sig : {SignalId::kAccX, SignalId::kAccY, SignalId::kAccZ, SignalId::kAccNorm}) {
    add(sig, kAccTime);
    add(sig, kGenericFreq);
  }
  add(SignalId::kTemp, kTempTime);
  add(SignalId::kTemp, kGenericFreq);
  add(SignalId::kHr, kHrTime);
  add(SignalId::kHr, kHrFreq);
  auto eda_time = kEdaFamilyTime;
  eda_time.push_back(kSmfd);
  add(SignalId::kEda, eda_time);
  add(SignalId::kScl, kEdaFamilyTime);
  add(SignalId::kScr, kEdaFamilyTime);
  add(SignalId::kEda, kEdaFamilyFreq);
  add(SignalId::kScl, kEdaFamilyFreq);
  add(SignalId::kScr, kEdaFamilyFreq);
}

const FeatureRegistry& FeatureRegistry::instance() {
  static const FeatureRegistry registry;
  return registry;
}

std::size_t FeatureRegistry::group_size(ChannelGroup group) const {
  std::size_t n = 0;
  for (const auto& f : features_)
    if (f.group == group) ++n;
  return n;
}

std::vector<std::string> FeatureRegistry::names() const {
  std::vector<std::string> out;
  out.reserve(features_.size());
  for (const auto& f : features_) out.push_back(f.name);
  return out;
}

std::vector<Stat> FeatureRegistry::stats_for(SignalId signal, Domain domain) const {
  std::vector<Stat> out;
  for (const auto& f : features_)
    if (f.signal == signal && f.domain == domain) out.push_back(f.stat);
  return out;
}

}  // namespace wristmood
