#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cyclsteg/codec.hpp"
#include "cyclsteg/error.hpp"
#include "cyclsteg/experiment.hpp"
#include "support.hpp"

using namespace cyclsteg;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::Io;
}

// Expected PSNR when b framed bits of random data land on M*N pixels: half the
// bits flip, each flip costs one unit of squared error over 3*M*N samples.
double expected_psnr(double framed_bits, double pixels) {
  return 10.0 * std::log10(255.0 * 255.0 * 6.0 * pixels / framed_bits);
}

void check_row_consistency(const ExperimentTable& t) {
  for (const auto& row : t.rows) {
    if (row.metrics.mse == 0) {
      CHECK(std::isinf(row.metrics.psnr));
      continue;
    }
    const double recomputed = 10.0 * std::log10(255.0 * 255.0 / row.metrics.mse);
    CHECK(std::abs(row.metrics.psnr - recomputed) <= 1e-9 * recomputed);
  }
}

void check_average(const ExperimentTable& t) {
  double p = 0, m = 0, n = 0, s = 0;
  std::size_t finite = 0;
  for (const auto& r : t.rows) {
    if (!std::isinf(r.metrics.psnr)) {
      p += r.metrics.psnr;
      ++finite;
    }
    m += r.metrics.mse;
    n += r.metrics.ncc;
    s += r.metrics.ssim;
  }
  const double k = static_cast<double>(t.rows.size());
  CHECK(t.average.psnr == doctest::Approx(p / static_cast<double>(finite)).epsilon(1e-12));
  CHECK(t.average.mse == doctest::Approx(m / k).epsilon(1e-12));
  CHECK(t.average.ncc == doctest::Approx(n / k).epsilon(1e-12));
  CHECK(t.average.ssim == doctest::Approx(s / k).epsilon(1e-12));
}

}  // namespace

TEST_CASE("default perspective 1: twenty images at full capacity") {
  const auto spec = ExperimentSpec::defaults(1, 1);
  const auto t = run_perspective1(spec);
  REQUIRE(t.rows.size() == 20);
  for (const auto& r : t.rows) {
    CHECK(r.payload_bytes == 8186);
    CHECK(r.dimensions == Dimensions{256, 256});
    CHECK(r.metrics.psnr >= 55.4);
    CHECK(r.metrics.psnr <= 56.4);
  }
  CHECK(t.average.ncc >= 0.999);
  CHECK(t.psnr_excluded == 0);
  check_average(t);
  check_row_consistency(t);
}

TEST_CASE("perspective 1 with an empty payload embeds only the header") {
  ExperimentSpec spec;
  spec.perspective = 1;
  spec.images = {{"one", SynthSeed{21}}};
  spec.dimensions = {{256, 256}};
  spec.payload_sizes = {0};
  spec.payload = RandomPayload{5};
  const auto t = run_perspective1(spec);
  REQUIRE(t.rows.size() == 1);

  // exact oracle: count header bits that disagree with the cover LSB
  const auto cover = synth_image(21, 256, 256);
  const std::uint64_t header = std::uint64_t{0x5357} << 32;
  int flips = 0;
  for (std::size_t i = 0; i < 48; ++i) {
    const int bit = static_cast<int>((header >> (47 - i)) & 1);
    const auto ch = static_cast<Channel>(i % 3 + 1);
    flips += (cover.sample(ch, PixelIndex{i}) & 1) != bit;
  }
  CHECK(t.rows[0].metrics.mse == flips / 196608.0);
  // E[flips] = 24 gives 10 log10(255^2 * 196608 / 24) = 87.26 dB
  CHECK(t.rows[0].metrics.psnr == doctest::Approx(expected_psnr(48, 65536)).epsilon(1.5 / 87.26));
}

TEST_CASE("default perspective 2: PSNR falls as the payload grows") {
  const auto t = run_perspective2(ExperimentSpec::defaults(2, 1));
  REQUIRE(t.rows.size() == 4);
  const std::size_t sizes[] = {2043, 4086, 6129, 8186};
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(t.rows[i].payload_bytes == sizes[i]);
    const double oracle = expected_psnr(static_cast<double>(framed_bit_count(sizes[i])), 65536);
    CHECK(std::abs(t.rows[i].metrics.psnr - oracle) <= 0.6);
    if (i > 0) CHECK(t.rows[i].metrics.psnr < t.rows[i - 1].metrics.psnr);
  }
  // oracle values themselves: 61.9 / 58.9 / 57.1 / 55.9
  CHECK(expected_psnr(framed_bit_count(2043), 65536) == doctest::Approx(61.93).epsilon(1e-3));
  CHECK(expected_psnr(framed_bit_count(8186), 65536) == doctest::Approx(55.91).epsilon(1e-3));
  CHECK(t.rows.front().metrics.psnr - t.rows.back().metrics.psnr <= 7.0);
  check_average(t);
  check_row_consistency(t);
}

TEST_CASE("perspective 2 sorts sizes and accepts a single size") {
  ExperimentSpec spec = ExperimentSpec::defaults(2, 9);
  spec.payload_sizes = {300, 100, 200};
  const auto t = run_perspective2(spec);
  REQUIRE(t.rows.size() == 3);
  CHECK(t.rows[0].payload_bytes == 100);
  CHECK(t.rows[2].payload_bytes == 300);

  spec.payload_sizes = {500};
  const auto one = run_perspective2(spec);
  REQUIRE(one.rows.size() == 1);
  CHECK(one.average == one.rows[0].metrics);
}

TEST_CASE("default perspective 3: PSNR rises with image size") {
  const auto t = run_perspective3(ExperimentSpec::defaults(3, 1));
  REQUIRE(t.rows.size() == 4);
  const std::uint32_t sides[] = {128, 256, 512, 1024};
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(t.rows[i].dimensions == Dimensions{sides[i], sides[i]});
    const double oracle =
        expected_psnr(static_cast<double>(framed_bit_count(2042)), double(sides[i]) * sides[i]);
    CHECK(std::abs(t.rows[i].metrics.psnr - oracle) <= 0.6);
    if (i > 0) CHECK(t.rows[i].metrics.psnr > t.rows[i - 1].metrics.psnr + 0.3);
  }
  check_row_consistency(t);
}

TEST_CASE("reruns are byte-identical") {
  const auto spec = ExperimentSpec::defaults(2, 77);
  const auto a = run_experiment(spec);
  const auto b = run_experiment(spec);
  CHECK(to_csv(a) == to_csv(b));
  CHECK(manifest_text(spec, a) == manifest_text(spec, b));

  test::TempDir dir("exp");
  write_csv(a, dir / "a.csv");
  write_csv(b, dir / "b.csv");
  CHECK(test::read_text(dir / "a.csv") == test::read_text(dir / "b.csv"));
}

TEST_CASE("csv shape and parse-back") {
  ExperimentTable empty;
  empty.perspective = 1;
  CHECK(to_csv(empty) == std::string(kCsvHeader) + "\n");
  CHECK(parse_csv(to_csv(empty), 1) == empty);

  const auto t = run_experiment(ExperimentSpec::defaults(2, 3));
  const auto text = to_csv(t);
  CHECK(text.find('\r') == std::string::npos);
  CHECK(text.back() == '\n');
  CHECK(parse_csv(text, 2) == t);
}

TEST_CASE("infinite PSNR rows are excluded from the PSNR mean") {
  ExperimentTable t;
  t.rows.push_back({"a", {4, 4}, 0, MetricReport{}});
  t.rows.push_back({"b", {4, 4}, 0, MetricReport{50.0, 0.5, 0.9, 0.8}});
  t.rows.push_back({"c", {4, 4}, 0, MetricReport{60.0, 0.1, 1.0, 1.0}});
  summarise(t);
  CHECK(t.psnr_excluded == 1);
  CHECK(t.average.psnr == 55.0);
  CHECK(t.average.mse == doctest::Approx(0.2));
  const auto text = to_csv(t);
  CHECK(text.find("a,4,4,0,inf,0,1,1,data,1\n") != std::string::npos);
  CHECK(text.find(",average,1\n") != std::string::npos);
  CHECK(parse_csv(text, 0) == t);

  ExperimentTable all_inf;
  all_inf.rows.push_back({"a", {1, 1}, 0, MetricReport{}});
  summarise(all_inf);
  CHECK(std::isinf(all_inf.average.psnr));
}

TEST_CASE("validation") {
  auto spec = ExperimentSpec::defaults(1, 1);
  spec.payload_sizes = {8187};
  CHECK(code_of([&] { validate(spec); }) == ErrorCode::PayloadExceedsCapacity);

  spec = ExperimentSpec::defaults(3, 1);
  spec.payload_sizes = {2043};  // does not fit 128x128
  CHECK(code_of([&] { run_perspective3(spec); }) == ErrorCode::PayloadExceedsCapacity);

  spec = ExperimentSpec::defaults(3, 1);
  spec.dimensions.resize(1);
  CHECK(code_of([&] { validate(spec); }) == ErrorCode::InvalidSpec);

  spec = ExperimentSpec::defaults(2, 1);
  spec.images.push_back({"x", SynthSeed{3}});
  CHECK(code_of([&] { validate(spec); }) == ErrorCode::InvalidSpec);

  spec = ExperimentSpec::defaults(1, 1);
  spec.images[0].name = "bad,name";
  CHECK(code_of([&] { validate(spec); }) == ErrorCode::InvalidSpec);

  spec = ExperimentSpec::defaults(1, 1);
  spec.perspective = 4;
  CHECK(code_of([&] { validate(spec); }) == ErrorCode::InvalidSpec);
  CHECK(code_of([] { ExperimentSpec::defaults(0, 1); }) == ErrorCode::InvalidSpec);

  spec = ExperimentSpec::defaults(1, 1);
  CHECK(code_of([&] { run_perspective2(spec); }) == ErrorCode::InvalidSpec);
}

TEST_CASE("json spec with file sources") {
  test::TempDir dir("spec");
  write_image_file(dir / "cover.png", synth_image(8, 48, 40));
  const auto payload_bytes = random_payload(1, 150);
  write_file_bytes(dir / "payload.bin", payload_bytes);
  test::write_text(dir / "p3.json", R"({
    "perspective": 3,
    "images": [{"name": "cover", "path": "cover.png"}],
    "dimensions": [[40, 30], [48, 40], [96, 80]],
    "payload_sizes": [100],
    "payload": {"file": "payload.bin"}
  })");
  const auto spec = ExperimentSpec::load(dir / "p3.json");
  CHECK(spec.dimensions.size() == 3);
  const auto t = run_experiment(spec);
  REQUIRE(t.rows.size() == 3);
  CHECK(t.rows[1].dimensions == Dimensions{48, 40});
  CHECK(t.rows[0].payload_bytes == 100);

  // whole-file payload when no size is given
  test::write_text(dir / "p1.json", R"({
    "perspective": 1,
    "images": [{"name": "cover", "path": "cover.png"}, {"name": "s", "seed": 4}],
    "dimensions": [[48, 40]],
    "payload": {"file": "payload.bin"}
  })");
  const auto t1 = run_experiment(ExperimentSpec::load(dir / "p1.json"));
  REQUIRE(t1.rows.size() == 2);
  CHECK(t1.rows[0].payload_bytes == 150);

  // mixed sizes in perspective 1 are rejected
  test::write_text(dir / "bad.json", R"({
    "perspective": 1,
    "images": [{"name": "cover", "path": "cover.png"}, {"name": "s", "seed": 4}],
    "dimensions": [[64, 64]],
    "payload_sizes": [10],
    "payload": {"seed": 1}
  })");
  CHECK(code_of([&] { run_experiment(ExperimentSpec::load(dir / "bad.json")); }) ==
        ErrorCode::InvalidSpec);

  CHECK(code_of([] { ExperimentSpec::from_json("{not json", "."); }) == ErrorCode::InvalidSpec);
  CHECK(code_of([] { ExperimentSpec::from_json(R"({"perspective": 1})", "."); }) ==
        ErrorCode::InvalidSpec);
}

TEST_CASE("manifest records seeds and sizes") {
  const auto spec = ExperimentSpec::defaults(3, 5);
  ExperimentTable t;
  const auto m = manifest_text(spec, t);
  CHECK(m.find("perspective=3\n") != std::string::npos);
  CHECK(m.find("payload_sizes=2042\n") != std::string::npos);
  CHECK(m.find("dimensions=128x128,256x256,512x512,1024x1024\n") != std::string::npos);
  CHECK(m.find("image=synth-5 synth:5\n") != std::string::npos);
  CHECK(m.find("payload_source=random:" + std::to_string(payload_seed_for(5))) !=
        std::string::npos);
}
