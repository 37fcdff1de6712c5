#include <gtest/gtest.h>

#include "temp_dir.hpp"
#include "wristmood/ingest.hpp"

namespace wristmood {
namespace {

using testing::TempDir;
using testing::write_text;

void write_minimal_session(const std::filesystem::path& dir) {
  write_text(dir / "ACC.csv", "1554220000,1554220000,1554220000\n32,32,32\n12,0,64\n-3,5,60\n");
  write_text(dir / "TEMP.csv", "1554220000\n4\n30.1\n30.2\n");
  write_text(dir / "EDA.csv", "1554220000\n4\n0.5\n0.6\n");
  write_text(dir / "HR.csv", "1554220010\n1\n70\n71\n");
}

TEST(Ingest, ParsesTempHeaderAndSamples) {
  TempDir tmp;
  write_minimal_session(tmp.path());
  const auto rec = parse_session(tmp.path());
  const auto& t = rec.channel(ChannelKind::kTemp);
  EXPECT_EQ(t.start_time, 1554220000.0);
  EXPECT_EQ(t.sample_rate, 4.0);
  EXPECT_EQ(t.samples, (std::vector<double>{30.1, 30.2}));
  EXPECT_EQ(rec.channel(ChannelKind::kHr).start_time, 1554220010.0);
  EXPECT_TRUE(rec.feature_extractable());
  EXPECT_TRUE(rec.warnings.empty());
}

TEST(Ingest, SplitsAccColumns) {
  TempDir tmp;
  write_minimal_session(tmp.path());
  const auto rec = parse_session(tmp.path());
  EXPECT_EQ(rec.channel(ChannelKind::kAccX).samples, (std::vector<double>{12, -3}));
  EXPECT_EQ(rec.channel(ChannelKind::kAccY).samples, (std::vector<double>{0, 5}));
  EXPECT_EQ(rec.channel(ChannelKind::kAccZ).samples, (std::vector<double>{64, 60}));
  EXPECT_EQ(rec.channel(ChannelKind::kAccZ).sample_rate, 32.0);
}

TEST(Ingest, MissingHrIsMissingChannel) {
  TempDir tmp;
  write_minimal_session(tmp.path());
  std::filesystem::remove(tmp / "HR.csv");
  try {
    parse_session(tmp.path());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingChannel);
    EXPECT_NE(std::string(e.what()).find("HR"), std::string::npos);
  }
}

TEST(Ingest, RejectsMalformedFiles) {
  TempDir tmp;
  write_minimal_session(tmp.path());
  write_text(tmp / "ACC.csv", "1554220000,1554220000,1554220000\n32,32,32\n12,0\n");
  try {
    parse_session(tmp.path());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBadAccRow);
  }
  write_minimal_session(tmp.path());
  write_text(tmp / "EDA.csv", "1554220000\n4\n0.5\nabc\n");
  try {
    parse_session(tmp.path());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNonNumericSample);
  }
  write_minimal_session(tmp.path());
  write_text(tmp / "TEMP.csv", "start\n4\n30\n");
  try {
    parse_session(tmp.path());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMalformedHeader);
  }
}

TEST(Ingest, SessionRoundTrip) {
  TempDir tmp;
  write_minimal_session(tmp / "a");
  write_text(tmp / "a" / "BVP.csv", "1554220000\n64\n0.25\n-1.5\n");
  write_text(tmp / "a" / "IBI.csv", "1554220000,IBI\n1.5,0.8\n2.3,0.81\n");
  const auto rec = parse_session(tmp / "a");
  write_session(tmp / "b", rec);
  const auto again = parse_session(tmp / "b");
  ASSERT_EQ(rec.channels.size(), again.channels.size());
  for (const auto& [kind, ch] : rec.channels) {
    const auto& other = again.channel(kind);
    EXPECT_EQ(ch.start_time, other.start_time);
    EXPECT_EQ(ch.sample_rate, other.sample_rate);
    EXPECT_EQ(ch.samples, other.samples);
  }
  ASSERT_EQ(again.ibi.size(), 2u);
  EXPECT_EQ(again.ibi[1].duration_seconds, 0.81);
}

TEST(Ingest, EmaRecord) {
  const auto e = parse_ema_record(
      R"({"scheduled_at":1000,"answered_at":1060,"happiness":3,"activeness":1})");
  EXPECT_EQ(e.scheduled_at, 1000);
  EXPECT_EQ(e.answered_at, 1060);
  EXPECT_EQ(e.happiness, 3);
  EXPECT_EQ(e.activeness, 1);
  EXPECT_EQ(parse_ema_record(format_ema_record(e)), e);
}

TEST(Ingest, EmaLikertOutOfRange) {
  try {
    parse_ema_record(R"({"scheduled_at":1,"answered_at":2,"happiness":5,"activeness":1})");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kLikertOutOfRange);
  }
  try {
    parse_ema_record(R"({"scheduled_at":1,"answered_at":2,"happiness":2})");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingField);
  }
}

TEST(Ingest, EmaLogSortedAndUnique) {
  TempDir tmp;
  write_text(tmp / "ema.ndjson",
             "{\"scheduled_at\":1000,\"answered_at\":1060,\"happiness\":3,\"activeness\":1}\n"
             "{\"scheduled_at\":1000,\"answered_at\":1030,\"happiness\":2,\"activeness\":2}\n");
  const auto log = parse_ema_log(tmp / "ema.ndjson");
  ASSERT_EQ(log.size(), 2u);
  EXPECT_EQ(log[0].answered_at, 1030);
  EXPECT_EQ(log[1].answered_at, 1060);

  write_text(tmp / "dup.ndjson",
             "{\"scheduled_at\":1000,\"answered_at\":1060,\"happiness\":3,\"activeness\":1}\n"
             "{\"scheduled_at\":1001,\"answered_at\":1060,\"happiness\":2,\"activeness\":2}\n");
  try {
    parse_ema_log(tmp / "dup.ndjson");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDuplicateEntry);
  }
}

SessionRecording recording_at(double start, const std::string& id) {
  SessionRecording r;
  r.session_id = id;
  r.channels[ChannelKind::kTemp] = ChannelSeries{ChannelKind::kTemp, start, 4.0, {30.0, 30.0}};
  return r;
}

TEST(Ingest, SplitDays) {
  const double day1 = 1554163200.0 + 8 * 3600;  // 2019-04-02 08:00 UTC
  const double day2 = day1 + 86400;
  std::vector<EmaEntry> emas;
  for (int i = 0; i < 3; ++i)
    emas.push_back({static_cast<std::int64_t>(day1) + 100 * i,
                    static_cast<std::int64_t>(day1) + 100 * i + 10, 2, 3});
  emas.push_back({static_cast<std::int64_t>(day2 + 86400), static_cast<std::int64_t>(day2 + 86400), 1, 1});
  auto split = split_days(emas, {recording_at(day2, "b"), recording_at(day1, "a")});
  ASSERT_EQ(split.bundles.size(), 2u);
  EXPECT_EQ(split.bundles[0].recording.session_id, "a");
  EXPECT_EQ(split.bundles[0].emas.size(), 3u);
  EXPECT_EQ(split.bundles[1].emas.size(), 0u);
  ASSERT_EQ(split.orphans.size(), 1u);
  EXPECT_EQ(to_iso(split.bundles[0].day), "2019-04-02");

  const auto empty = split_days({}, {});
  EXPECT_TRUE(empty.bundles.empty());
  EXPECT_TRUE(empty.orphans.empty());
}

TEST(Ingest, SplitDaysHonoursTimeZone) {
  // 23:30 UTC on 2019-04-02 is already 2019-04-03 at +02:00.
  const double t = 1554163200.0 + 23.5 * 3600;
  auto split = split_days({}, {recording_at(t, "late")}, TimeZone::parse("+02:00"));
  EXPECT_EQ(to_iso(split.bundles[0].day), "2019-04-03");
}

}  // namespace
}  // namespace wristmood
