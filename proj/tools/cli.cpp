#include "cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "cyclsteg/codec.hpp"
#include "cyclsteg/error.hpp"
#include "cyclsteg/experiment.hpp"
#include "cyclsteg/image.hpp"
#include "cyclsteg/metrics.hpp"
#include "cyclsteg/pipeline.hpp"

namespace cyclsteg::cli {

namespace {

namespace fs = std::filesystem;

const CLI::Validator kNonEmpty(
    [](std::string& value) { return value.empty() ? std::string("path must not be empty") : ""; },
    "NONEMPTY");

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::Io:
    case ErrorCode::ConnectionFailed:
      return kIoError;
    default:
      return kDataError;
  }
}

template <typename T>
T parse_int(std::string_view field, const char* what) {
  T v{};
  const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc{} || end != field.data() + field.size()) {
    throw Error(ErrorCode::CorruptStream,
                std::string("records file: bad ") + what + " '" + std::string(field) + "'");
  }
  return v;
}

std::vector<std::uint8_t> parse_hex(const std::string& hex) {
  if (hex.size() % 2 != 0) throw CLI::ValidationError("--payload-hex", "odd number of digits");
  std::vector<std::uint8_t> out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto [end, ec] = std::from_chars(hex.data() + 2 * i, hex.data() + 2 * i + 2, out[i], 16);
    if (ec != std::errc{} || end != hex.data() + 2 * i + 2) {
      throw CLI::ValidationError("--payload-hex", "not a hex string");
    }
  }
  return out;
}

std::string text_of(const std::vector<std::uint8_t>& bytes) {
  return std::string(bytes.begin(), bytes.end());
}

struct EmbedArgs {
  std::string cover;
  std::string payload_path;
  std::string payload_hex;
  std::string out;
};

struct ExtractArgs {
  std::string stego;
  std::string out;
};

struct MetricsArgs {
  std::string cover;
  std::string stego;
  bool csv = false;
};

struct ExperimentArgs {
  int perspective = 0;
  std::uint64_t seed = 1;
  std::string spec;
  std::string out_dir;
};

struct ServeArgs {
  std::string listen;
  std::string from_file;
  std::size_t count = 0;
  std::string ready_file;
  std::uint32_t max_length = kDefaultMaxMessageBytes;
};

struct SendArgs {
  std::string to;
  std::string to_file;
  std::string cover;
  std::string records;
};

int cmd_embed(const EmbedArgs& a, std::ostream& out) {
  const auto cover = read_image_file(a.cover);
  const auto payload = a.payload_path.empty() ? parse_hex(a.payload_hex)
                                              : read_file_bytes(a.payload_path);
  const auto stego = embed(cover, payload);
  write_image_file(a.out, stego);
  out << "embedded " << payload.size() << " payload bytes (" << framed_bit_count(payload.size())
      << " of " << capacity_bits(cover) << " bits, " << usable_payload_bytes(cover)
      << " payload bytes usable)\n";
  return kOk;
}

int cmd_extract(const ExtractArgs& a, std::ostream& out) {
  const auto payload = extract(read_image_file(a.stego));
  write_file_bytes(a.out, payload);
  out << "extracted " << payload.size() << " payload bytes\n";
  return kOk;
}

int cmd_metrics(const MetricsArgs& a, std::ostream& out) {
  const auto cover = read_image_file(a.cover);
  const auto stego = read_image_file(a.stego);
  const auto m = evaluate(cover, stego);
  if (a.csv) {
    std::size_t payload = 0;
    try {
      payload = extract(stego).size();
    } catch (const Error&) {
      // not a stego image; report zero payload
    }
    out << kMetricsCsvHeader << '\n'
        << metrics_csv_row(fs::path(a.stego).filename().string(),
                           Dimensions{stego.width(), stego.height()}, payload, m)
        << '\n';
  } else {
    out << "psnr " << format_value(m.psnr) << '\n'
        << "mse " << format_value(m.mse) << '\n'
        << "ncc " << format_value(m.ncc) << '\n'
        << "ssim " << format_value(m.ssim) << '\n';
  }
  return kOk;
}

int cmd_capacity(const std::string& cover_path, std::ostream& out) {
  const auto cover = read_image_file(cover_path);
  out << capacity_bits(cover) << " bits, " << usable_payload_bytes(cover) << " payload bytes\n";
  return kOk;
}

int cmd_experiment(const ExperimentArgs& a, std::ostream& out, std::ostream& err) {
  ExperimentSpec spec = a.spec.empty() ? ExperimentSpec::defaults(a.perspective, a.seed)
                                       : ExperimentSpec::load(a.spec);
  if (spec.perspective != a.perspective) {
    err << "error: spec file is for perspective " << spec.perspective << ", --perspective is "
        << a.perspective << '\n';
    return kUsage;
  }
  const auto table = run_experiment(spec);
  std::error_code ec;
  fs::create_directories(a.out_dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + a.out_dir + ": " + ec.message());
  const auto stem = "perspective" + std::to_string(spec.perspective);
  const fs::path csv = fs::path(a.out_dir) / (stem + ".csv");
  const fs::path manifest = fs::path(a.out_dir) / (stem + "_manifest.txt");
  write_csv(table, csv);
  write_manifest(spec, table, manifest);
  out << "wrote " << table.rows.size() << " rows to " << csv.string() << '\n'
      << "average psnr " << format_value(table.average.psnr) << " mse "
      << format_value(table.average.mse) << " ncc " << format_value(table.average.ncc)
      << " ssim " << format_value(table.average.ssim) << '\n';
  return kOk;
}

void print_records(const FusionResult& r, std::ostream& out, std::ostream& err) {
  err << "received " << r.records.size() << " records (" << r.payload_bytes << " payload bytes in "
      << r.width << "x" << r.height << " stego image)\n";
  for (const auto& rec : r.records) out << format_record_line(rec) << '\n';
  out.flush();
}

int cmd_serve(const ServeArgs& a, std::ostream& out, std::ostream& err) {
  if (!a.from_file.empty()) {
    print_records(fusion_read_file(a.from_file, a.max_length), out, err);
    return kOk;
  }
  const auto endpoint = Endpoint::parse(a.listen);
  auto listener = TcpListener::bind(endpoint);
  err << "listening on " << endpoint.host << ":" << listener.port() << '\n';
  if (!a.ready_file.empty()) {
    std::ofstream(a.ready_file) << listener.port() << '\n';
  }
  int status = kOk;
  for (std::size_t handled = 0; a.count == 0 || handled < a.count; ++handled) {
    try {
      print_records(fusion_receive(listener, a.max_length), out, err);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::ConnectionFailed) throw;
      err << "error: " << e.what() << '\n';
      status = kDataError;
    }
  }
  return status;
}

int cmd_send(const SendArgs& a, std::ostream& out) {
  std::optional<Endpoint> endpoint;
  if (!a.to.empty()) endpoint = Endpoint::parse(a.to);
  const auto cover = read_image_file(a.cover);
  const auto records = parse_records_csv(text_of(read_file_bytes(a.records)));
  const auto result = endpoint ? sink_send(records, cover, *endpoint)
                               : sink_write_file(records, cover, a.to_file);
  out << "sent " << result.record_count << " records (" << result.payload_bytes
      << " payload bytes, " << result.message_bytes << " message bytes)\n";
  return kOk;
}

}  // namespace

std::vector<SensorRecord> parse_records_csv(std::string_view text) {
  std::vector<SensorRecord> records;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.rfind("id", 0) == 0) continue;
    std::vector<std::string_view> f;
    std::string_view rest(line);
    for (;;) {
      const auto comma = rest.find(',');
      f.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (f.size() != 4) {
      throw Error(ErrorCode::CorruptStream, "records file: expected 4 fields in '" + line + "'");
    }
    SensorRecord r;
    r.sensor_id = parse_int<std::uint16_t>(f[0], "id");
    const auto kind = parse_int<unsigned>(f[1], "kind");
    if (kind > kMaxSensorKind) {
      throw Error(ErrorCode::BadKind, "records file: kind " + std::to_string(kind));
    }
    r.kind = static_cast<SensorKind>(kind);
    r.timestamp_ms = parse_int<std::uint64_t>(f[2], "timestamp");
    r.value_milli = parse_int<std::int32_t>(f[3], "value");
    records.push_back(r);
  }
  return records;
}

std::string format_record_line(const SensorRecord& r) {
  return std::to_string(r.sensor_id) + ',' + std::to_string(static_cast<unsigned>(r.kind)) + ',' +
         std::to_string(r.timestamp_ms) + ',' + std::to_string(r.value_milli);
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cyclic LSB steganography for sensor data transport", "cyclsteg"};
  app.require_subcommand(1);

  EmbedArgs embed_args;
  auto* embed_cmd = app.add_subcommand("embed", "hide a payload in a cover image");
  embed_cmd->add_option("--cover", embed_args.cover, "cover image (PNG or PPM)")
      ->required()
      ->check(kNonEmpty);
  auto* payload_opt =
      embed_cmd->add_option("--payload", embed_args.payload_path, "payload file")->check(kNonEmpty);
  auto* hex_opt = embed_cmd->add_option("--payload-hex", embed_args.payload_hex, "payload as hex");
  payload_opt->excludes(hex_opt);
  embed_cmd->add_option("--out", embed_args.out, "stego image to write (.ppm or PNG)")
      ->required()
      ->check(kNonEmpty);

  ExtractArgs extract_args;
  auto* extract_cmd = app.add_subcommand("extract", "recover the payload from a stego image");
  extract_cmd->add_option("--stego", extract_args.stego)->required()->check(kNonEmpty);
  extract_cmd->add_option("--out", extract_args.out)->required()->check(kNonEmpty);

  MetricsArgs metrics_args;
  auto* metrics_cmd = app.add_subcommand("metrics", "PSNR, MSE, NCC and SSIM of a pair");
  metrics_cmd->add_option("--cover", metrics_args.cover)->required()->check(kNonEmpty);
  metrics_cmd->add_option("--stego", metrics_args.stego)->required()->check(kNonEmpty);
  metrics_cmd->add_flag("--csv", metrics_args.csv, "print a CSV row instead");

  std::string capacity_cover;
  auto* capacity_cmd = app.add_subcommand("capacity", "embedding capacity of a cover");
  capacity_cmd->add_option("--cover", capacity_cover)->required()->check(kNonEmpty);

  ExperimentArgs exp_args;
  auto* exp_cmd = app.add_subcommand("experiment", "run an evaluation perspective");
  exp_cmd->add_option("--perspective", exp_args.perspective)
      ->required()
      ->check(CLI::IsMember({1, 2, 3}));
  exp_cmd->add_option("--seed", exp_args.seed, "seed for the default spec")->capture_default_str();
  exp_cmd->add_option("--spec", exp_args.spec, "JSON spec file (default: built-in)")
      ->check(kNonEmpty);
  exp_cmd->add_option("--out-dir", exp_args.out_dir)->required()->check(kNonEmpty);

  auto* pipe_cmd = app.add_subcommand("pipeline", "sink/fusion-centre transport");
  pipe_cmd->require_subcommand(1);

  ServeArgs serve_args;
  auto* serve_cmd = pipe_cmd->add_subcommand("serve", "receive stego messages and print records");
  auto* listen_opt = serve_cmd->add_option("--listen", serve_args.listen, "host:port");
  auto* from_file_opt =
      serve_cmd->add_option("--from-file", serve_args.from_file, "read one message from a file")
          ->check(kNonEmpty);
  listen_opt->excludes(from_file_opt);
  serve_cmd->add_option("--count", serve_args.count, "stop after N connections (0 = forever)");
  serve_cmd->add_option("--ready-file", serve_args.ready_file,
                        "write the bound port here once listening");
  serve_cmd->add_option("--max-length", serve_args.max_length, "largest accepted message body")
      ->capture_default_str();

  SendArgs send_args;
  auto* send_cmd = pipe_cmd->add_subcommand("send", "embed records and send one message");
  auto* to_opt = send_cmd->add_option("--to", send_args.to, "host:port");
  auto* to_file_opt =
      send_cmd->add_option("--to-file", send_args.to_file, "write the message to a file")
          ->check(kNonEmpty);
  to_opt->excludes(to_file_opt);
  send_cmd->add_option("--cover", send_args.cover)->required()->check(kNonEmpty);
  send_cmd->add_option("--records", send_args.records, "CSV id,kind,timestamp,value_millis")
      ->required()
      ->check(kNonEmpty);

  try {
    app.parse(argc, argv);
    if (embed_cmd->parsed() && payload_opt->count() + hex_opt->count() == 0) {
      throw CLI::RequiredError("--payload or --payload-hex");
    }
    if (serve_cmd->parsed() && listen_opt->count() + from_file_opt->count() == 0) {
      throw CLI::RequiredError("--listen or --from-file");
    }
    if (send_cmd->parsed() && to_opt->count() + to_file_opt->count() == 0) {
      throw CLI::RequiredError("--to or --to-file");
    }
    if (serve_cmd->parsed() && listen_opt->count() > 0) Endpoint::parse(serve_args.listen);
    if (send_cmd->parsed() && to_opt->count() > 0) Endpoint::parse(send_args.to);
    if (embed_cmd->parsed() && hex_opt->count() > 0) parse_hex(embed_args.payload_hex);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (embed_cmd->parsed()) return cmd_embed(embed_args, out);
    if (extract_cmd->parsed()) return cmd_extract(extract_args, out);
    if (metrics_cmd->parsed()) return cmd_metrics(metrics_args, out);
    if (capacity_cmd->parsed()) return cmd_capacity(capacity_cover, out);
    if (exp_cmd->parsed()) return cmd_experiment(exp_args, out, err);
    if (serve_cmd->parsed()) return cmd_serve(serve_args, out, err);
    if (send_cmd->parsed()) return cmd_send(send_args, out);
  } catch (const CapacityError& e) {
    err << "error: payload exceeds capacity: requires " << e.required_bits() << " bits, "
        << e.available_bits() << " available\n";
    return kDataError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  }
  return kUsage;
}

}  // namespace cyclsteg::cli
