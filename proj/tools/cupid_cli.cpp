// Copyright 2026 The Cupid Motion Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: partition, coarsen, estimate, predict-gop, compare
// and bdrate. Exit codes: 0 success, 1 usage error, 2 data error.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cupid/bd_metric.hpp"
#include "cupid/frame.hpp"
#include "cupid/motion.hpp"
#include "cupid/partition.hpp"
#include "cupid/pipeline.hpp"
#include "cupid/report.hpp"
#include "cupid/split_tree.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace cupid {
namespace {

struct InputOptions {
  std::string path;
  int width = 0;
  int height = 0;
  std::string format = "yuv420p8";
  int max_frames = 0;

  void add_to(CLI::App* cmd) {
    cmd->add_option("-i,--input", path, "Raw planar video (or .pgm/.ppm image)")->required();
    cmd->add_option("--width", width, "Frame width in pixels (raw input)");
    cmd->add_option("--height", height, "Frame height in pixels (raw input)");
    cmd->add_option("--format", format, "Raw layout: yuv420p8, yuv444p8 or gray8")
        ->capture_default_str();
    cmd->add_option("--max-frames", max_frames, "Read at most this many frames (0 = all)")
        ->capture_default_str();
  }

  bool is_pnm() const {
    const auto ext = fs::path(path).extension().string();
    return ext == ".pgm" || ext == ".ppm";
  }

  Sequence load() const {
    if (is_pnm()) {
      Sequence s;
      s.frames.push_back(read_pnm(path));
      return s;
    }
    if (width <= 0 || height <= 0) {
      throw std::invalid_argument("--width and --height must be positive for raw input");
    }
    Sequence s = load_raw_video(path, width, height, parse_raw_format(format), max_frames);
    if (s.empty()) throw std::runtime_error("'" + path + "' contains no frames");
    return s;
  }

  RawFormat output_format() const {
    return is_pnm() ? RawFormat::kGray8 : parse_raw_format(format);
  }
};

// --cuboids N or --block-size B (N = floor(W/B) * floor(H/B)).
struct CountOptions {
  int cuboids = 0;
  int block = 0;

  void add_to(CLI::App* cmd, int default_block) {
    block = default_block;
    auto* c = cmd->add_option("--cuboids", cuboids, "Number of cuboids");
    auto* b = cmd->add_option("--block-size", block,
                              "Derive the cuboid count from this block size")
                  ->capture_default_str();
    c->excludes(b);
    b->excludes(c);
  }

  int resolve(int width, int height) const {
    if (cuboids > 0) return cuboids;
    const int n = cuboid_count_from_blocks(width, height, block);
    if (n < 1) throw std::invalid_argument("frame is smaller than one block");
    return n;
  }
};

std::string psnr_text(double db) { return format_number(db); }

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

const Frame& pick_frame(const Sequence& seq, int index) {
  if (index < 0 || static_cast<std::size_t>(index) >= seq.size()) {
    throw std::invalid_argument("frame index " + std::to_string(index) +
                                " outside the sequence (" + std::to_string(seq.size()) +
                                " frames)");
  }
  return seq.frames[index];
}

// ---------------------------------------------------------------------------
// partition

struct PartitionCmd {
  InputOptions input;
  CountOptions count;
  int frame_index = 0;
  std::string channels = "all";
  std::string out_tree;
  std::string out_dump;
  bool verify = false;

  int run() const {
    const Sequence seq = input.load();
    const Frame& frame = pick_frame(seq, frame_index);
    const int n = count.resolve(frame.width(), frame.height());
    const CuboidPartition p = partition(frame, n, parse_channel_policy(channels));
    const TreeBitCost bits = tree_bit_cost(p.tree);

    if (!out_tree.empty()) write_tree_file(out_tree, p.tree);
    if (!out_dump.empty()) {
      std::ofstream out(out_dump);
      if (!out) throw std::runtime_error("cannot write '" + out_dump + "'");
      write_partition_dump(out, p);
    }

    std::cout << "cuboids " << p.size() << "\n"
              << "total_sse " << format_number(p.total_sse) << "\n"
              << "tree_bits " << bits.bits << "\n"
              << "tree_bits_bound " << tree_bit_bound(p.size(), p.width, p.height) << "\n";

    if (verify) {
      if (!out_dump.empty()) {
        std::ifstream in(out_dump);
        const PartitionDump dump = read_partition_dump(in);
        if (!tiles_frame(dump.cuboids, frame.width(), frame.height()) ||
            dump.cuboids != p.cuboids) {
          throw std::runtime_error("verify: dump does not tile the frame");
        }
      }
      if (!out_tree.empty() && !(read_tree_file(out_tree) == p.tree)) {
        throw std::runtime_error("verify: tree file does not decode to the partition");
      }
      if (!tiles_frame(p.cuboids, frame.width(), frame.height())) {
        throw std::runtime_error("verify: partition does not tile the frame");
      }
      std::cout << "verify ok\n";
    }
    return 0;
  }
};

// ---------------------------------------------------------------------------
// coarsen

struct CoarsenCmd {
  InputOptions input;
  CountOptions count;
  std::string channels = "all";
  std::string out;

  int run() const {
    const Sequence seq = input.load();
    std::vector<Frame> coarse;
    double mean_psnr = 0;
    for (const Frame& f : seq.frames) {
      const auto p =
          partition(f, count.resolve(f.width(), f.height()), parse_channel_policy(channels));
      coarse.push_back(coarsen(f, p));
      mean_psnr += psnr(f, coarse.back());
    }
    mean_psnr /= static_cast<double>(seq.size());
    if (!out.empty()) save_raw_video(out, coarse, input.output_format());
    std::cout << "frames " << seq.size() << "\n"
              << "mean_psnr " << psnr_text(mean_psnr) << "\n";
    return 0;
  }
};

// ---------------------------------------------------------------------------
// estimate

struct EstimateCmd {
  InputOptions input;
  CountOptions count;
  int current = 1;
  int reference = 0;
  std::string scheme = "cuboid";
  std::string channels = "all";
  int range = 16;
  std::string metric = "sse";
  int threads = 1;
  std::string out_field;
  std::string out_predicted;

  int run() const {
    const Sequence seq = input.load();
    const Frame& cur = pick_frame(seq, current);
    const Frame& ref = pick_frame(seq, reference);
    const Scheme s = parse_scheme(scheme);
    if (s == Scheme::kCoarse) throw std::invalid_argument("estimate supports cuboid or fixed_block");

    std::vector<Cuboid> regions;
    std::uint64_t tree_bits = 0;
    if (s == Scheme::kCuboid) {
      // Cuboids come from the reference (anchor) frame.
      const auto p = partition(ref, count.resolve(ref.width(), ref.height()),
                               parse_channel_policy(channels));
      regions = p.cuboids;
      tree_bits = tree_bit_cost(p.tree).bits;
    } else {
      regions = fixed_block_grid(cur.width(), cur.height(), count.block);
    }
    SearchConfig cfg;
    cfg.range = range;
    cfg.metric = parse_metric(metric);
    const MotionField field = estimate_motion(cur, ref, regions, cfg, threads);
    const Frame predicted = compensate(ref, field);

    if (!out_field.empty()) {
      std::ofstream out(out_field);
      if (!out) throw std::runtime_error("cannot write '" + out_field + "'");
      write_motion_dump(out, field);
    }
    if (!out_predicted.empty()) {
      save_raw_video(out_predicted, std::span(&predicted, 1), input.output_format());
    }
    std::cout << "regions " << field.size() << "\n"
              << "psnr " << psnr_text(psnr(cur, predicted)) << "\n"
              << "tree_bits " << tree_bits << "\n"
              << "motion_bits " << motion_bit_cost(field, cfg) << "\n";
    return 0;
  }
};

// ---------------------------------------------------------------------------
// pipeline configuration shared by predict-gop and compare

struct PipelineOptions {
  std::string config_path;
  int gop_size = 16;
  int cuboids = 0;
  int block = 32;
  std::string scheme = "cuboid";
  std::string partition_source = "anchor_only";
  std::string reference_mode = "chained_predicted";
  std::string channels = "all";
  int range = 16;
  std::string metric = "sse";
  int quant_step = 1;
  int threads = 1;
  CLI::App* cmd = nullptr;

  void add_to(CLI::App* c, bool with_scheme) {
    cmd = c;
    c->add_option("--config", config_path, "JSON file with pipeline settings (flags override)");
    c->add_option("--gop-size", gop_size, "Frames per GOP")->capture_default_str();
    c->add_option("--cuboids", cuboids, "Number of cuboids (default: from --block-size)");
    c->add_option("--block-size", block,
                  "Fixed block size; also sets the cuboid count when --cuboids is absent")
        ->capture_default_str();
    if (with_scheme) {
      c->add_option("--scheme", scheme, "cuboid, fixed_block or coarse")->capture_default_str();
      c->add_option("--partition-source", partition_source,
                    "anchor_only or per_frame (coarse implies per_frame)")
          ->capture_default_str();
    }
    c->add_option("--reference-mode", reference_mode, "chained_predicted or previous_original")
        ->capture_default_str();
    c->add_option("--channels", channels, "Channels for split decisions: all or luma")
        ->capture_default_str();
    c->add_option("--range", range, "Full-search range in pixels")->capture_default_str();
    c->add_option("--metric", metric, "Matching metric: sse or sad")->capture_default_str();
    c->add_option("--quant-step", quant_step,
                  "Dead-zone quantizer step for the residual entropy estimate")
        ->capture_default_str();
    c->add_option("--threads", threads, "Worker threads")->capture_default_str();
  }

  bool given(const char* flag) const {
    const CLI::Option* opt = cmd->get_option_no_throw(flag);
    return opt != nullptr && opt->count() > 0;
  }
  // Flag values apply when given explicitly, or as defaults without a config.
  bool use(const char* flag) const { return given(flag) || config_path.empty(); }

  PipelineConfig build() const {
    PipelineConfig cfg;
    if (!config_path.empty()) cfg = load_config(config_path);
    if (use("--gop-size")) cfg.gop_size = gop_size;
    if (use("--block-size")) cfg.block_size = block;
    if (given("--cuboids")) cfg.n_cuboids = cuboids;
    if (use("--scheme")) cfg.scheme = parse_scheme(scheme);
    if (given("--partition-source")) {
      cfg.partition_source = parse_partition_source(partition_source);
    } else if (config_path.empty()) {
      cfg.partition_source = cfg.scheme == Scheme::kCoarse
                                 ? PartitionSource::kPerFrame
                                 : parse_partition_source(partition_source);
    }
    if (use("--reference-mode")) cfg.reference_mode = parse_reference_mode(reference_mode);
    if (use("--channels")) cfg.channels = parse_channel_policy(channels);
    if (use("--range")) cfg.search.range = range;
    if (use("--metric")) cfg.search.metric = parse_metric(metric);
    if (use("--quant-step")) cfg.quant_step = quant_step;
    if (use("--threads")) cfg.threads = threads;
    validate(cfg);
    return cfg;
  }

  static PipelineConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config '" + path + "'");
    PipelineConfig cfg;
    try {
      const json j = json::parse(in);
      cfg.gop_size = j.value("gop_size", cfg.gop_size);
      if (j.contains("n_cuboids") && !j["n_cuboids"].is_null()) {
        cfg.n_cuboids = j["n_cuboids"].get<int>();
      }
      cfg.block_size = j.value("block_size", cfg.block_size);
      if (j.contains("scheme")) cfg.scheme = parse_scheme(j["scheme"].get<std::string>());
      if (j.contains("partition_source")) {
        cfg.partition_source = parse_partition_source(j["partition_source"].get<std::string>());
      } else if (cfg.scheme == Scheme::kCoarse) {
        cfg.partition_source = PartitionSource::kPerFrame;
      }
      if (j.contains("reference_mode")) {
        cfg.reference_mode = parse_reference_mode(j["reference_mode"].get<std::string>());
      }
      if (j.contains("channels")) {
        cfg.channels = parse_channel_policy(j["channels"].get<std::string>());
      }
      if (j.contains("search")) {
        const auto& s = j["search"];
        cfg.search.range = s.value("range", cfg.search.range);
        if (s.contains("metric")) cfg.search.metric = parse_metric(s["metric"].get<std::string>());
      }
      cfg.quant_step = j.value("quant_step", cfg.quant_step);
      cfg.threads = j.value("threads", cfg.threads);
    } catch (const json::exception& e) {
      throw std::runtime_error("config '" + path + "': " + e.what());
    }
    return cfg;
  }
};

struct SequenceRun {
  std::vector<std::vector<Frame>> gops;
  std::vector<GopResult> results;

  std::uint64_t side_info_bits() const {
    std::uint64_t t = 0;
    for (const auto& r : results) t += r.side_info_bits();
    return t;
  }
  double mean_psnr() const {
    double sum = 0;
    int n = 0;
    for (const auto& r : results) {
      for (const auto& f : r.frames) {
        if (is_infinite_psnr(f.psnr)) return kInfinitePsnr;
        sum += f.psnr;
        ++n;
      }
    }
    return n ? sum / n : 0;
  }
};

SequenceRun run_sequence(const Sequence& seq, const PipelineConfig& cfg) {
  if (static_cast<int>(seq.size()) < cfg.gop_size) {
    throw std::invalid_argument("sequence has " + std::to_string(seq.size()) +
                                " frames, fewer than --gop-size " + std::to_string(cfg.gop_size));
  }
  SequenceRun run;
  run.gops = split_into_gops(seq, GopLayout{cfg.gop_size, 0});
  for (const auto& gop : run.gops) run.results.push_back(run_gop(gop, cfg));
  return run;
}

// ---------------------------------------------------------------------------
// predict-gop

struct PredictGopCmd {
  InputOptions input;
  PipelineOptions pipeline;
  std::string report;
  std::string out_predicted;

  int run() const {
    const PipelineConfig cfg = pipeline.build();
    const Sequence seq = input.load();
    const SequenceRun r = run_sequence(seq, cfg);

    std::ostringstream csv;
    csv << "gop,frame,scheme,regions,psnr,tree_bits,motion_bits,side_info_bits,"
           "residual_sse,residual_bits_est,recon_psnr_est\n";
    std::uint64_t residual_bits = 0;
    std::vector<Frame> predicted;
    for (std::size_t g = 0; g < r.gops.size(); ++g) {
      const GopResult& res = r.results[g];
      const ResidualEstimate est = estimate_residual(r.gops[g], res, cfg.quant_step);
      residual_bits += est.bits;
      const int base = static_cast<int>(g) * cfg.gop_size;
      csv << g << ',' << base << ',' << to_string(cfg.scheme) << ",,,"
          << format_number(static_cast<double>(res.anchor_tree_bits)) << ','
          << format_number(0) << ','
          << format_number(static_cast<double>(res.anchor_tree_bits)) << ",,,\n";
      predicted.push_back(r.gops[g].front());
      // Per-frame entropy is recomputed so each row carries its own share.
      for (std::size_t k = 0; k < res.frames.size(); ++k) {
        const FrameResult& f = res.frames[k];
        GopResult single;
        single.frames.push_back(f);
        const ResidualEstimate fe = estimate_residual(r.gops[g], single, cfg.quant_step);
        csv << g << ',' << base + f.index << ',' << to_string(cfg.scheme) << ',' << f.regions
            << ',' << psnr_text(f.psnr) << ',' << format_number(static_cast<double>(f.tree_bits))
            << ',' << format_number(static_cast<double>(f.motion_bits)) << ','
            << format_number(static_cast<double>(f.side_info_bits())) << ','
            << format_number(static_cast<double>(f.residual.sse)) << ','
            << format_number(static_cast<double>(fe.bits)) << ','
            << psnr_text(fe.frame_psnr.front()) << '\n';
        predicted.push_back(f.predicted);
      }
    }
    if (!report.empty()) write_text_file(report, csv.str());
    if (!out_predicted.empty()) save_raw_video(out_predicted, predicted, input.output_format());

    const std::uint64_t side = r.side_info_bits();
    std::cout << "scheme " << to_string(cfg.scheme) << "\n"
              << "partition_source " << to_string(cfg.partition_source) << "\n"
              << "gops " << r.gops.size() << "\n"
              << "mean_prediction_psnr " << psnr_text(r.mean_psnr()) << "\n"
              << "side_info_bits " << side << "\n"
              << "residual_bits_est " << residual_bits << " (zero-order entropy, step "
              << cfg.quant_step << ")\n"
              << "total_bits " << side + residual_bits << "\n";
    return 0;
  }
};

// ---------------------------------------------------------------------------
// compare: RD curves of the cuboid, fixed-block and coarse schemes over a
// ladder of residual quantizer steps, with BD deltas against the first.

struct CompareCmd {
  InputOptions input;
  PipelineOptions pipeline;
  std::vector<int> steps{2, 4, 8, 16};
  std::vector<std::string> schemes{"cuboid", "fixed_block", "coarse"};
  std::string report;

  int run() const {
    const PipelineConfig base = pipeline.build();
    const Sequence seq = input.load();
    std::vector<ReportCurve> curves;
    for (const std::string& name : schemes) {
      PipelineConfig cfg = base;
      cfg.scheme = parse_scheme(name);
      cfg.partition_source = cfg.scheme == Scheme::kCoarse      ? PartitionSource::kPerFrame
                             : cfg.scheme == Scheme::kFixedBlock ? PartitionSource::kAnchorOnly
                                                                 : base.partition_source;
      const SequenceRun r = run_sequence(seq, cfg);
      ReportCurve curve{name, {}, std::nullopt};
      for (int step : steps) {
        std::uint64_t bits = r.side_info_bits();
        double psnr_sum = 0;
        int frames = 0;
        for (std::size_t g = 0; g < r.gops.size(); ++g) {
          const auto est = estimate_residual(r.gops[g], r.results[g], step);
          bits += est.bits;
          for (double p : est.frame_psnr) {
            psnr_sum += p;
            ++frames;
          }
        }
        curve.points.push_back(RDPoint{static_cast<double>(bits), frames ? psnr_sum / frames : 0});
      }
      std::sort(curve.points.begin(), curve.points.end(),
                [](const RDPoint& a, const RDPoint& b) { return a.rate < b.rate; });
      std::cout << name << ": side_info_bits " << r.side_info_bits()
                << " mean_prediction_psnr " << psnr_text(r.mean_psnr()) << "\n";
      curves.push_back(std::move(curve));
    }
    for (std::size_t i = 1; i < curves.size(); ++i) {
      try {
        curves[i].bd = bd_delta(curves.front().points, curves[i].points);
        std::cout << "bd " << curves[i].label << " vs " << curves.front().label << ": "
                  << format_number(curves[i].bd->delta_rate) << " %, "
                  << format_number(curves[i].bd->delta_psnr) << " dB\n";
      } catch (const std::invalid_argument& e) {
        std::cerr << "bd " << curves[i].label << ": skipped (" << e.what() << ")\n";
      }
    }
    const std::string text = emit_report(curves);
    if (!report.empty()) {
      write_text_file(report, text);
    } else {
      std::cout << text;
    }
    return 0;
  }
};

// ---------------------------------------------------------------------------
// bdrate

struct BdRateCmd {
  std::vector<std::string> curves;

  int run() const {
    if (curves.size() != 2) {
      throw std::invalid_argument("bdrate needs exactly two --curve files (reference, test)");
    }
    std::vector<std::vector<RDPoint>> points;
    for (const auto& path : curves) {
      std::ifstream in(path);
      if (!in) throw std::runtime_error("cannot open '" + path + "'");
      points.push_back(read_rd_curve(in));
    }
    const BDResult bd = bd_delta(points[0], points[1]);
    std::cout << "delta_rate " << format_number(bd.delta_rate) << " %\n"
              << "delta_psnr " << format_number(bd.delta_psnr) << " dB\n";
    return 0;
  }
};

int run_main(int argc, char** argv) {
  CLI::App app{"Cuboidal partitioning and motion modelling toolkit"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  PartitionCmd part;
  auto* p = app.add_subcommand("partition", "Partition one frame into cuboids");
  part.input.add_to(p);
  part.count.add_to(p, 32);
  p->add_option("--frame-index", part.frame_index, "Frame to partition");
  p->add_option("--channels", part.channels, "Channels for split decisions: all or luma");
  p->add_option("--out-tree", part.out_tree, "Write the split-tree bitstream file");
  p->add_option("--out-dump", part.out_dump, "Write the 'x y w h' cuboid dump");
  p->add_flag("--verify", part.verify, "Re-read written outputs and check the tiling");

  CoarsenCmd coarse;
  auto* c = app.add_subcommand("coarsen", "Replace every cuboid by its mean");
  coarse.input.add_to(c);
  coarse.count.add_to(c, 32);
  c->add_option("--channels", coarse.channels, "Channels for split decisions: all or luma");
  c->add_option("-o,--out", coarse.out, "Write the coarse frames as raw video");

  EstimateCmd est;
  auto* e = app.add_subcommand("estimate", "Motion-estimate one frame against another");
  est.input.add_to(e);
  est.count.add_to(e, 32);
  e->add_option("--current", est.current, "Index of the current frame");
  e->add_option("--reference", est.reference, "Index of the reference frame");
  e->add_option("--scheme", est.scheme, "cuboid or fixed_block");
  e->add_option("--channels", est.channels, "Channels for split decisions: all or luma");
  e->add_option("--range", est.range, "Full-search range in pixels");
  e->add_option("--metric", est.metric, "Matching metric: sse or sad");
  e->add_option("--threads", est.threads, "Worker threads");
  e->add_option("--out-field", est.out_field, "Write the 'x y w h dx dy cost' dump");
  e->add_option("--out-predicted", est.out_predicted, "Write the predicted frame");

  PredictGopCmd pred;
  auto* g = app.add_subcommand("predict-gop", "Run the GOP prediction pipeline");
  pred.input.add_to(g);
  pred.pipeline.add_to(g, true);
  g->add_option("--report", pred.report, "Per-frame CSV report");
  g->add_option("--out-predicted", pred.out_predicted,
                "Write anchors and predicted frames as raw video");

  CompareCmd cmp;
  auto* k = app.add_subcommand("compare", "RD comparison of the cuboid, fixed-block and coarse schemes");
  cmp.input.add_to(k);
  cmp.pipeline.add_to(k, false);
  k->add_option("--partition-source", cmp.pipeline.partition_source,
                "Partition source of the cuboid scheme");
  k->add_option("--steps", cmp.steps, "Residual quantizer steps, one RD point each");
  k->add_option("--schemes", cmp.schemes, "Schemes to compare; the first is the BD reference");
  k->add_option("--report", cmp.report, "RD/BD CSV report (stdout if absent)");

  BdRateCmd bd;
  auto* b = app.add_subcommand("bdrate", "Bjontegaard deltas of two RD curves");
  b->add_option("--curve", bd.curves, "RD curve CSV; pass twice (reference, then test)")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*p) return part.run();
    if (*c) return coarse.run();
    if (*e) return est.run();
    if (*g) return pred.run();
    if (*k) return cmp.run();
    if (*b) return bd.run();
  } catch (const std::invalid_argument& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  }
  return 1;
}

}  // namespace
}  // namespace cupid

int main(int argc, char** argv) { return cupid::run_main(argc, argv); }
