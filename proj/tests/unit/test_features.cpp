#include <gtest/gtest.h>

#include <filesystem>

#include "densecap/errors.hpp"
#include "densecap/features.hpp"
#include "densecap/io_util.hpp"
#include "densecap/rng.hpp"

using namespace densecap;
namespace fs = std::filesystem;

namespace {

FeatureSequence from_rows(std::initializer_list<std::initializer_list<float>> rows) {
  FeatureSequence s;
  s.video_id = "v";
  s.data.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index r = 0;
  for (const auto& row : rows) {
    Eigen::Index c = 0;
    for (float x : row) s.data(r, c++) = x;
    ++r;
  }
  return s;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("densecap_features_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST(Segf, RoundTripRandomMatrix) {
  Rng rng(11);
  FeatureSequence s;
  s.video_id = "r";
  s.data.resize(7, 5);
  for (Eigen::Index i = 0; i < s.data.size(); ++i) s.data.data()[i] = static_cast<float>(rng.normal());
  const auto back = decode_features(encode_features(s));
  EXPECT_EQ(back.data, s.data);
}

TEST(Segf, SingleZeroRoundTrips) {
  const auto s = from_rows({{0.0f}});
  EXPECT_EQ(decode_features(encode_features(s)).data, s.data);
}

TEST(Segf, HeaderLayout) {
  const std::string b = encode_features(from_rows({{1.0f, 2.0f}}));
  ASSERT_EQ(b.size(), 16u + 8u);
  EXPECT_EQ(b.substr(0, 4), "SEGF");
  EXPECT_EQ(b[4], 1);
  EXPECT_EQ(b[8], 1);
  EXPECT_EQ(b[12], 2);
  // 1.0f little-endian
  EXPECT_EQ(static_cast<unsigned char>(b[19]), 0x3fu);
  EXPECT_EQ(static_cast<unsigned char>(b[18]), 0x80u);
}

TEST(Segf, TruncatedPayloadReportsOffset) {
  std::string b = encode_features(from_rows({{1, 2}, {3, 4}}));
  b.resize(b.size() - 3);
  try {
    decode_features(b);
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_EQ(e.offset(), b.size());
    EXPECT_EQ(e.kind(), ErrorKind::kFormat);
  }
}

TEST(Segf, RejectsBadMagicVersionAndTrailingBytes) {
  std::string b = encode_features(from_rows({{1, 2}}));
  std::string bad = b;
  bad[0] = 'X';
  EXPECT_THROW(decode_features(bad), FormatError);
  bad = b;
  bad[4] = 2;
  try {
    decode_features(bad);
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_EQ(e.offset(), 4u);
  }
  EXPECT_THROW(decode_features(b + "x"), FormatError);
  EXPECT_THROW(decode_features(b.substr(0, 10)), FormatError);
}

TEST(Segf, RejectsNonFiniteValues) {
  auto s = from_rows({{1, 2}});
  std::string b = encode_features(s);
  const float nan = std::numeric_limits<float>::quiet_NaN();
  std::memcpy(&b[20], &nan, 4);
  try {
    decode_features(b);
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_EQ(e.offset(), 20u);
  }
}

TEST(MeanPool, HandExamples) {
  const auto s = from_rows({{1}, {3}, {8}});
  EXPECT_DOUBLE_EQ(mean_pool(s, {0, 1})(0), 2.0);
  EXPECT_DOUBLE_EQ(mean_pool(s, {2, 2})(0), 8.0);
  EXPECT_THROW(mean_pool(s, {1, 3}), RangeError);
  const auto c = from_rows({{4, 5}, {4, 5}, {4, 5}});
  EXPECT_EQ(mean_pool(c, {0, 2}), c.row(0));
}

TEST(ContextSummary, HandRecursion) {
  const auto ctx = context_summary(from_rows({{0}, {1}}), 0.9);
  EXPECT_DOUBLE_EQ(ctx.forward(0, 0), 0.0);
  EXPECT_NEAR(ctx.forward(1, 0), 0.1, 1e-15);
  EXPECT_NEAR(ctx.backward(0, 0), 0.9, 1e-15);
  EXPECT_DOUBLE_EQ(ctx.backward(1, 0), 1.0);
}

TEST(ContextSummary, ConstantAndSingleRowAreFixedPoints) {
  const auto c = from_rows({{2, -1}, {2, -1}, {2, -1}});
  const auto ctx = context_summary(c);
  EXPECT_TRUE(ctx.forward.isApprox(c.data.cast<double>(), 1e-15));
  EXPECT_TRUE(ctx.backward.isApprox(c.data.cast<double>(), 1e-15));
  const auto one = from_rows({{5, 6}});
  const auto c1 = context_summary(one);
  EXPECT_EQ(c1.forward, one.data.cast<double>());
  EXPECT_EQ(c1.backward, one.data.cast<double>());
  EXPECT_THROW(context_summary(one, 1.0), ConfigError);
  EXPECT_THROW(context_summary(one, 0.0), ConfigError);
}

namespace {

DatasetManifest small_manifest() {
  DatasetManifest m;
  ManifestEntry e;
  e.meta = VideoMeta::make("a", 4.0, 64.0, 256);
  e.feature_file = "features/a.segf";
  e.events.push_back({Interval(0.0, 2.0), "a man is cooking", 1});
  e.events.push_back({Interval(2.5, 4.0), "the end", std::nullopt});
  m.entries.push_back(e);
  return m;
}

}  // namespace

TEST(Manifest, JsonRoundTrip) {
  const auto m = small_manifest();
  const auto back = parse_manifest(manifest_to_json(m));
  ASSERT_EQ(back.entries.size(), 1u);
  const auto& e = back.entries[0];
  EXPECT_EQ(e.meta.video_id, "a");
  EXPECT_EQ(e.meta.n_segments, 4u);
  ASSERT_EQ(e.events.size(), 2u);
  EXPECT_EQ(e.events[0].interval, Interval(0.0, 2.0));
  EXPECT_EQ(e.events[0].topic_id, 1);
  EXPECT_FALSE(e.events[1].topic_id.has_value());
  EXPECT_EQ(manifest_to_json(back), manifest_to_json(m));
}

TEST(Manifest, ValidationErrors) {
  auto m = small_manifest();
  EXPECT_NO_THROW(validate_manifest(m, 2));
  EXPECT_THROW(validate_manifest(m, 1), DataError);  // topic 1 with one topic
  m.entries[0].events[1].caption.clear();
  EXPECT_THROW(validate_manifest(m), DataError);
  m = small_manifest();
  m.entries[0].events[1] = {Interval(3.0, 4.5), "late", std::nullopt};
  EXPECT_THROW(validate_manifest(m), DataError);
  m = small_manifest();
  m.entries.push_back(m.entries[0]);
  EXPECT_THROW(validate_manifest(m), DataError);
  EXPECT_THROW(parse_manifest("{not json"), FormatError);
  EXPECT_THROW(parse_manifest("[{\"video_id\": \"x\"}]"), DataError);
}

TEST(Manifest, MissingFeatureFileNamesVideo) {
  const fs::path dir = scratch("missing");
  auto m = small_manifest();
  write_manifest(m, dir / "m.json");
  const auto back = read_manifest(dir / "m.json");
  try {
    load_features(back, back.entries[0]);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("video a"), std::string::npos);
    EXPECT_EQ(exit_code(e.kind()), 2);
  }
}

TEST(Manifest, LoadChecksRowCount) {
  const fs::path dir = scratch("rows");
  auto m = small_manifest();
  write_manifest(m, dir / "m.json");
  write_features(from_rows({{1}, {2}, {3}}), dir / "features/a.segf");
  const auto back = read_manifest(dir / "m.json");
  EXPECT_THROW(load_features(back, back.entries[0]), DataError);
  write_features(from_rows({{1}, {2}, {3}, {4}}), dir / "features/a.segf");
  EXPECT_EQ(load_features(back, back.entries[0]).rows(), 4u);
}

TEST(AtomicWrite, LeavesNoTemporary) {
  const fs::path dir = scratch("atomic");
  write_file_atomic(dir / "sub/x.txt", "hello");
  EXPECT_EQ(read_text_file(dir / "sub/x.txt"), "hello");
  EXPECT_FALSE(fs::exists(dir / "sub/x.txt.tmp"));
}
