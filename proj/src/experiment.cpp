#include "cyclsteg/experiment.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <random>
#include <sstream>

#include "cyclsteg/codec.hpp"
#include "cyclsteg/error.hpp"
#include "cyclsteg/framing.hpp"

namespace cyclsteg {

namespace {

constexpr Dimensions kDefaultDimensions{256, 256};

std::string dims_text(Dimensions d) {
  return std::to_string(d.width) + "x" + std::to_string(d.height);
}

[[noreturn]] void invalid(const std::string& message) {
  throw Error(ErrorCode::InvalidSpec, message);
}

bool is_synth(const ImageSource& s) { return std::holds_alternative<SynthSeed>(s.source); }

Dimensions synth_dimensions(const ExperimentSpec& spec) {
  return spec.dimensions.empty() ? kDefaultDimensions : spec.dimensions.front();
}

/// The cover as used in perspectives 1 and 2.
RgbImage native_cover(const ExperimentSpec& spec, const ImageSource& src) {
  if (const auto* seed = std::get_if<SynthSeed>(&src.source)) {
    const auto d = synth_dimensions(spec);
    return synth_image(seed->value, d.width, d.height);
  }
  return read_image_file(std::get<std::filesystem::path>(src.source));
}

RgbImage cover_at(const ImageSource& src, Dimensions d) {
  if (const auto* seed = std::get_if<SynthSeed>(&src.source)) {
    return synth_image(seed->value, d.width, d.height);
  }
  const auto img = read_image_file(std::get<std::filesystem::path>(src.source));
  if (img.width() == d.width && img.height() == d.height) return img;
  return resize_nearest(img, d.width, d.height);
}

std::vector<std::size_t> resolved_sizes(const ExperimentSpec& spec) {
  if (!spec.payload_sizes.empty()) return spec.payload_sizes;
  if (const auto* path = std::get_if<std::filesystem::path>(&spec.payload)) {
    return {std::filesystem::file_size(*path)};
  }
  return {};
}

std::vector<std::uint8_t> payload_bytes(const ExperimentSpec& spec, std::size_t count) {
  if (const auto* r = std::get_if<RandomPayload>(&spec.payload)) {
    return random_payload(r->seed, count);
  }
  auto bytes = read_file_bytes(std::get<std::filesystem::path>(spec.payload));
  if (bytes.size() < count) {
    invalid("payload file holds " + std::to_string(bytes.size()) + " bytes, " +
            std::to_string(count) + " requested");
  }
  bytes.resize(count);
  return bytes;
}

void check_capacity(Dimensions d, std::size_t payload) {
  const std::size_t available = static_cast<std::size_t>(d.width) * d.height;
  const std::size_t required = framed_bit_count(payload);
  if (required > available) throw CapacityError(required, available);
}

struct Job {
  std::string name;
  std::function<RgbImage()> cover;
  std::size_t payload_bytes;
};

ExperimentTable run_jobs(int perspective, const std::vector<Job>& jobs,
                         std::span<const std::uint8_t> payload) {
  std::vector<std::future<ExperimentRow>> pending;
  pending.reserve(jobs.size());
  for (const auto& job : jobs) {
    pending.push_back(std::async(std::launch::async, [&job, payload] {
      const auto cover = job.cover();
      const auto stego = embed(cover, payload.first(job.payload_bytes));
      return ExperimentRow{job.name, Dimensions{cover.width(), cover.height()}, job.payload_bytes,
                           evaluate(cover, stego)};
    }));
  }
  ExperimentTable table;
  table.perspective = perspective;
  for (auto& f : pending) table.rows.push_back(f.get());
  summarise(table);
  return table;
}

void require_perspective(const ExperimentSpec& spec, int expected) {
  if (spec.perspective != expected) {
    invalid("spec is for perspective " + std::to_string(spec.perspective) + ", not " +
            std::to_string(expected));
  }
}

}  // namespace

ExperimentSpec ExperimentSpec::defaults(int perspective, std::uint64_t seed) {
  ExperimentSpec spec;
  spec.perspective = perspective;
  spec.payload = RandomPayload{payload_seed_for(seed)};
  const auto synth = [](std::uint64_t s) {
    return ImageSource{"synth-" + std::to_string(s), SynthSeed{s}};
  };
  switch (perspective) {
    case 1:
      for (std::uint64_t i = 0; i < 20; ++i) spec.images.push_back(synth(seed + i));
      spec.dimensions = {kDefaultDimensions};
      spec.payload_sizes = {8186};
      break;
    case 2:
      spec.images = {synth(seed)};
      spec.dimensions = {kDefaultDimensions};
      spec.payload_sizes = {2043, 4086, 6129, 8186};
      break;
    case 3:
      spec.images = {synth(seed)};
      spec.dimensions = {{128, 128}, {256, 256}, {512, 512}, {1024, 1024}};
      spec.payload_sizes = {2042};
      break;
    default:
      invalid("perspective must be 1, 2 or 3");
  }
  return spec;
}

ExperimentSpec ExperimentSpec::from_json(std::string_view text,
                                         const std::filesystem::path& base_dir) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    invalid(std::string("spec is not valid JSON: ") + e.what());
  }
  const auto resolve = [&](const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_absolute() ? path : base_dir / path;
  };
  ExperimentSpec spec;
  try {
    spec.perspective = doc.at("perspective").get<int>();
    for (const auto& img : doc.at("images")) {
      ImageSource src;
      src.name = img.at("name").get<std::string>();
      if (img.contains("seed")) {
        src.source = SynthSeed{img.at("seed").get<std::uint64_t>()};
      } else {
        src.source = resolve(img.at("path").get<std::string>());
      }
      spec.images.push_back(std::move(src));
    }
    if (doc.contains("dimensions")) {
      for (const auto& d : doc.at("dimensions")) {
        spec.dimensions.push_back({d.at(0).get<std::uint32_t>(), d.at(1).get<std::uint32_t>()});
      }
    }
    if (doc.contains("payload_sizes")) {
      spec.payload_sizes = doc.at("payload_sizes").get<std::vector<std::size_t>>();
    }
    const auto& payload = doc.at("payload");
    if (payload.contains("seed")) {
      spec.payload = RandomPayload{payload.at("seed").get<std::uint64_t>()};
    } else {
      spec.payload = resolve(payload.at("file").get<std::string>());
    }
  } catch (const json::exception& e) {
    invalid(std::string("malformed spec: ") + e.what());
  }
  return spec;
}

ExperimentSpec ExperimentSpec::load(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  return from_json(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()),
                   path.parent_path());
}

std::vector<std::uint8_t> random_payload(std::uint64_t seed, std::size_t count) {
  std::mt19937_64 rng(seed);
  std::vector<std::uint8_t> out(count);
  for (auto& b : out) b = static_cast<std::uint8_t>(rng() >> 56);
  return out;
}

void summarise(ExperimentTable& table) {
  table.average = MetricReport{};
  table.psnr_excluded = 0;
  if (table.rows.empty()) return;
  double psnr_sum = 0.0;
  double mse_sum = 0.0;
  double ncc_sum = 0.0;
  double ssim_sum = 0.0;
  for (const auto& row : table.rows) {
    if (std::isinf(row.metrics.psnr)) {
      ++table.psnr_excluded;
    } else {
      psnr_sum += row.metrics.psnr;
    }
    mse_sum += row.metrics.mse;
    ncc_sum += row.metrics.ncc;
    ssim_sum += row.metrics.ssim;
  }
  const auto n = static_cast<double>(table.rows.size());
  const std::size_t finite = table.rows.size() - table.psnr_excluded;
  table.average.psnr = finite == 0 ? kInfinitePsnr : psnr_sum / static_cast<double>(finite);
  table.average.mse = mse_sum / n;
  table.average.ncc = ncc_sum / n;
  table.average.ssim = ssim_sum / n;
}

void validate(const ExperimentSpec& spec) {
  if (spec.perspective < 1 || spec.perspective > 3) invalid("perspective must be 1, 2 or 3");
  if (spec.images.empty()) invalid("at least one image is required");
  if (spec.perspective != 1 && spec.images.size() != 1) {
    invalid("perspective " + std::to_string(spec.perspective) + " uses exactly one image");
  }
  for (const auto& img : spec.images) {
    if (img.name.empty() || img.name == "average" ||
        img.name.find_first_of(",\"\r\n") != std::string::npos) {
      invalid("image name '" + img.name + "' is empty, reserved or not CSV-safe");
    }
  }
  for (const auto& d : spec.dimensions) {
    if (d.width == 0 || d.height == 0) invalid("dimensions must be at least 1x1");
  }
  if (spec.perspective == 3) {
    if (spec.dimensions.size() < 2) invalid("perspective 3 needs at least two dimensions");
  } else if (spec.dimensions.size() > 1) {
    invalid("perspective " + std::to_string(spec.perspective) + " takes at most one dimension");
  }

  const auto sizes = resolved_sizes(spec);
  if (sizes.empty()) invalid("no payload size given");
  if (spec.perspective != 2 && sizes.size() != 1) {
    invalid("perspective " + std::to_string(spec.perspective) + " uses a single payload size");
  }
  const std::size_t largest = *std::max_element(sizes.begin(), sizes.end());
  if (const auto* path = std::get_if<std::filesystem::path>(&spec.payload)) {
    std::error_code ec;
    const auto available = std::filesystem::file_size(*path, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot stat payload file " + path->string());
    if (available < largest) {
      invalid("payload file holds " + std::to_string(available) + " bytes, " +
              std::to_string(largest) + " requested");
    }
  }

  if (spec.perspective == 3) {
    const auto smallest = *std::min_element(
        spec.dimensions.begin(), spec.dimensions.end(), [](Dimensions a, Dimensions b) {
          return std::uint64_t{a.width} * a.height < std::uint64_t{b.width} * b.height;
        });
    check_capacity(smallest, largest);
    return;
  }
  std::vector<Dimensions> seen;
  for (const auto& img : spec.images) {
    const Dimensions d = is_synth(img) ? synth_dimensions(spec) : [&] {
      const auto cover = native_cover(spec, img);
      return Dimensions{cover.width(), cover.height()};
    }();
    check_capacity(d, largest);
    seen.push_back(d);
  }
  if (spec.perspective == 1 &&
      std::adjacent_find(seen.begin(), seen.end(), std::not_equal_to<>{}) != seen.end()) {
    invalid("perspective 1 images must share one size");
  }
}

ExperimentTable run_perspective1(const ExperimentSpec& spec) {
  require_perspective(spec, 1);
  validate(spec);
  const std::size_t size = resolved_sizes(spec).front();
  const auto payload = payload_bytes(spec, size);
  std::vector<Job> jobs;
  for (const auto& img : spec.images) {
    jobs.push_back({img.name, [&spec, &img] { return native_cover(spec, img); }, size});
  }
  return run_jobs(1, jobs, payload);
}

ExperimentTable run_perspective2(const ExperimentSpec& spec) {
  require_perspective(spec, 2);
  validate(spec);
  auto sizes = resolved_sizes(spec);
  std::sort(sizes.begin(), sizes.end());
  const auto payload = payload_bytes(spec, sizes.back());
  const auto& img = spec.images.front();
  const auto cover = native_cover(spec, img);
  std::vector<Job> jobs;
  for (const auto size : sizes) jobs.push_back({img.name, [&cover] { return cover; }, size});
  return run_jobs(2, jobs, payload);
}

ExperimentTable run_perspective3(const ExperimentSpec& spec) {
  require_perspective(spec, 3);
  validate(spec);
  const std::size_t size = resolved_sizes(spec).front();
  const auto payload = payload_bytes(spec, size);
  const auto& img = spec.images.front();
  std::vector<Job> jobs;
  for (const auto d : spec.dimensions) {
    jobs.push_back({img.name, [&img, d] { return cover_at(img, d); }, size});
  }
  return run_jobs(3, jobs, payload);
}

ExperimentTable run_experiment(const ExperimentSpec& spec) {
  switch (spec.perspective) {
    case 1: return run_perspective1(spec);
    case 2: return run_perspective2(spec);
    case 3: return run_perspective3(spec);
    default: invalid("perspective must be 1, 2 or 3");
  }
}

std::string metrics_csv_row(std::string_view image_name, Dimensions dims,
                            std::size_t payload_bytes, const MetricReport& m) {
  std::string out(image_name);
  out += ',' + std::to_string(dims.width) + ',' + std::to_string(dims.height) + ',' +
         std::to_string(payload_bytes) + ',' + format_value(m.psnr) + ',' + format_value(m.mse) +
         ',' + format_value(m.ncc) + ',' + format_value(m.ssim);
  return out;
}

std::string to_csv(const ExperimentTable& table) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& row : table.rows) {
    out += metrics_csv_row(row.image_name, row.dimensions, row.payload_bytes, row.metrics);
    out += std::isinf(row.metrics.psnr) ? ",data,1\n" : ",data,0\n";
  }
  if (!table.rows.empty()) {
    const auto& a = table.average;
    out += "average,,,," + format_value(a.psnr) + ',' + format_value(a.mse) + ',' +
           format_value(a.ncc) + ',' + format_value(a.ssim) + ",average," +
           std::to_string(table.psnr_excluded) + '\n';
  }
  return out;
}

ExperimentTable parse_csv(std::string_view text, int perspective) {
  const auto corrupt = [](const std::string& why) -> Error {
    return Error(ErrorCode::CorruptStream, "experiment CSV: " + why);
  };
  const auto to_size = [&](const std::string& field) -> std::size_t {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(field, &used);
      if (used != field.size()) throw corrupt("bad integer '" + field + "'");
      return static_cast<std::size_t>(v);
    } catch (const std::logic_error&) {
      throw corrupt("bad integer '" + field + "'");
    }
  };

  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw corrupt("missing header");

  ExperimentTable table;
  table.perspective = perspective;
  bool saw_average = false;
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::istringstream fields(line);
    for (std::string cell; std::getline(fields, cell, ',');) f.push_back(cell);
    if (!line.empty() && line.back() == ',') f.emplace_back();
    if (f.size() != 10) throw corrupt("expected 10 fields in '" + line + "'");
    const MetricReport m{parse_value(f[4]), parse_value(f[5]), parse_value(f[6]),
                         parse_value(f[7])};
    if (f[8] == "data") {
      table.rows.push_back(ExperimentRow{
          f[0],
          Dimensions{static_cast<std::uint32_t>(to_size(f[1])),
                     static_cast<std::uint32_t>(to_size(f[2]))},
          to_size(f[3]), m});
    } else if (f[8] == "average") {
      table.average = m;
      table.psnr_excluded = to_size(f[9]);
      saw_average = true;
    } else {
      throw corrupt("unknown row kind '" + f[8] + "'");
    }
  }
  if (!table.rows.empty() && !saw_average) throw corrupt("missing average row");
  return table;
}

void write_csv(const ExperimentTable& table, const std::filesystem::path& destination) {
  const auto text = to_csv(table);
  write_file_bytes(destination, std::span(reinterpret_cast<const std::uint8_t*>(text.data()),
                                          text.size()));
}

std::string manifest_text(const ExperimentSpec& spec, const ExperimentTable& table) {
  std::string out = "manifest_version=1\n";
  out += "stego_format=" + std::to_string(kStegoFormatVersion) + '\n';
  out += "frame_magic=0x5357\n";
  out += "perspective=" + std::to_string(spec.perspective) + '\n';
  out += "rng=mt19937_64,top-8-bits-per-draw\n";
  if (const auto* r = std::get_if<RandomPayload>(&spec.payload)) {
    out += "payload_source=random:" + std::to_string(r->seed) + '\n';
  } else {
    out += "payload_source=file:" + std::get<std::filesystem::path>(spec.payload).string() + '\n';
  }
  out += "payload_sizes=";
  const auto sizes = resolved_sizes(spec);
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    out += (i ? "," : "") + std::to_string(sizes[i]);
  }
  out += "\ndimensions=";
  for (std::size_t i = 0; i < spec.dimensions.size(); ++i) {
    out += (i ? "," : "") + dims_text(spec.dimensions[i]);
  }
  out += '\n';
  for (const auto& img : spec.images) {
    out += "image=" + img.name + ' ';
    if (const auto* s = std::get_if<SynthSeed>(&img.source)) {
      out += "synth:" + std::to_string(s->value) + '\n';
    } else {
      out += "file:" + std::get<std::filesystem::path>(img.source).string() + '\n';
    }
  }
  out += "rows=" + std::to_string(table.rows.size()) + '\n';
  out += "psnr_excluded=" + std::to_string(table.psnr_excluded) + '\n';
  return out;
}

void write_manifest(const ExperimentSpec& spec, const ExperimentTable& table,
                    const std::filesystem::path& destination) {
  const auto text = manifest_text(spec, table);
  write_file_bytes(destination, std::span(reinterpret_cast<const std::uint8_t*>(text.data()),
                                          text.size()));
}

}  // namespace cyclsteg
