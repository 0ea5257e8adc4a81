// Command-line front end: codebook generation, topology generation, single
// simulations, seeded benchmark batches, and contention estimation runs.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bcc/code.hpp"
#include "bcc/harness/config.hpp"
#include "bcc/harness/run.hpp"
#include "bcc/harness/topogen.hpp"
#include "bcc/rng.hpp"
#include "bcc/topology.hpp"

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open output file: " + path);
    }
    return out;
}

bcc::harness::ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw bcc::harness::ConfigError("cannot open config file: " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return bcc::harness::parse_config_text(ss.str());
}

void print_summary(const bcc::harness::ExperimentConfig& cfg,
                   const bcc::harness::BatchResult& batch) {
    std::cout << "protocol=" << cfg.protocol << " seeds=" << batch.summary.seeds
              << " success=" << batch.summary.successes << "/" << batch.summary.seeds
              << " mean_rounds=" << batch.summary.mean_rounds
              << " max_rounds=" << batch.summary.max_rounds << '\n';
}

int cmd_codegen(std::size_t M, std::size_t a, const std::string& construction,
                const std::string& out_path) {
    const bcc::codes::Construction cons =
        bcc::codes::construction_from_string(construction);
    const bcc::codes::BccCode code =
        cons == bcc::codes::Construction::Greedy
            ? bcc::codes::BccCode::build_greedy(M, a)
            : bcc::codes::BccCode::build_powermap(M, a);
    if (out_path.empty()) {
        bcc::codes::write_codebook(std::cout, code);
    } else {
        auto out = open_out(out_path);
        bcc::codes::write_codebook(out, code);
    }
    return 0;
}

int cmd_topo(const std::string& kind, std::size_t n, std::size_t width,
             std::size_t height, double p, std::uint64_t seed,
             const std::string& out_path) {
    bcc::air::Topology topo;
    if (kind == "complete") {
        topo = bcc::harness::make_complete(n);
    } else if (kind == "path") {
        topo = bcc::harness::make_path(n);
    } else if (kind == "grid") {
        topo = bcc::harness::make_grid(width, height);
    } else if (kind == "random_connected") {
        bcc::Rng rng(seed);
        topo = bcc::harness::make_random_connected(n, p, rng);
    } else {
        throw std::runtime_error("unknown topology kind: " + kind);
    }
    if (out_path.empty()) {
        bcc::air::write_topology(std::cout, topo);
    } else {
        auto out = open_out(out_path);
        bcc::air::write_topology(out, topo);
    }
    return 0;
}

int run_one(const bcc::harness::ExperimentConfig& cfg, std::size_t seed_index,
            const std::string& transcript_path) {
    bcc::harness::BatchContext ctx = bcc::harness::make_batch_context(cfg);
    bcc::air::Transcript transcript;
    bcc::air::Transcript* tp = transcript_path.empty() ? nullptr : &transcript;
    bcc::harness::MetricsRecord rec =
        bcc::harness::run_scenario(cfg, ctx, seed_index, tp);
    if (!transcript_path.empty()) {
        auto out = open_out(transcript_path);
        transcript.write(out);
    }
    std::vector<bcc::harness::MetricsRecord> records{rec};
    if (!cfg.out.empty()) {
        auto out = open_out(cfg.out);
        bcc::harness::write_csv(out, records);
    } else {
        bcc::harness::write_csv(std::cout, records);
    }
    return rec.success ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bounded-contention coding and additive radio network simulation"};
    app.require_subcommand(1);

    // codegen
    auto* codegen = app.add_subcommand("codegen", "Emit a codebook file");
    std::size_t cg_M = 0;
    std::size_t cg_a = 0;
    std::string cg_construction = "greedy";
    std::string cg_out;
    codegen->add_option("--M", cg_M, "codebook size")->required();
    codegen->add_option("--a", cg_a, "contention bound")->required();
    codegen->add_option("--construction", cg_construction, "greedy|powermap");
    codegen->add_option("--out", cg_out, "output path (default stdout)");

    // topo
    auto* topo = app.add_subcommand("topo", "Emit a topology edge-list file");
    std::string tp_kind = "complete";
    std::size_t tp_n = 0;
    std::size_t tp_w = 0;
    std::size_t tp_h = 0;
    double tp_p = 0.5;
    std::uint64_t tp_seed = 0;
    std::string tp_out;
    topo->add_option("--kind", tp_kind, "complete|path|grid|random_connected")->required();
    topo->add_option("--n", tp_n, "node count");
    topo->add_option("--width", tp_w, "grid width");
    topo->add_option("--height", tp_h, "grid height");
    topo->add_option("--p", tp_p, "edge probability");
    topo->add_option("--seed", tp_seed, "rng seed");
    topo->add_option("--out", tp_out, "output path (default stdout)");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Run one simulation");
    std::string sim_config;
    std::optional<std::uint64_t> sim_seed;
    std::string sim_out;
    std::string sim_transcript;
    std::string sim_protocol;
    simulate->add_option("--config", sim_config, "JSON config path")->required();
    simulate->add_option("--seed", sim_seed, "master seed override");
    simulate->add_option("--out", sim_out, "metrics CSV path override");
    simulate->add_option("--transcript", sim_transcript, "transcript log path");
    simulate->add_option("--protocol", sim_protocol, "protocol override");

    // bench
    auto* bench = app.add_subcommand("bench", "Run a seeded batch and write CSV");
    std::string bench_config;
    std::string bench_out;
    std::optional<std::uint64_t> bench_seed;
    bench->add_option("--config", bench_config, "JSON config path")->required();
    bench->add_option("--out", bench_out, "metrics CSV path override");
    bench->add_option("--seed", bench_seed, "master seed override");

    // estimate
    auto* estimate = app.add_subcommand("estimate", "Run a contention-estimation scenario");
    std::string est_config;
    std::optional<std::uint64_t> est_seed;
    std::string est_out;
    estimate->add_option("--config", est_config, "JSON config path")->required();
    estimate->add_option("--seed", est_seed, "master seed override");
    estimate->add_option("--out", est_out, "metrics CSV path override");

    CLI11_PARSE(app, argc, argv);

    try {
        if (codegen->parsed()) {
            return cmd_codegen(cg_M, cg_a, cg_construction, cg_out);
        }
        if (topo->parsed()) {
            return cmd_topo(tp_kind, tp_n, tp_w, tp_h, tp_p, tp_seed, tp_out);
        }
        if (simulate->parsed()) {
            auto cfg = load_config(sim_config);
            if (sim_seed) {
                cfg.master_seed = *sim_seed;
            }
            if (!sim_out.empty()) {
                cfg.out = sim_out;
            }
            if (!sim_protocol.empty()) {
                cfg.protocol = sim_protocol;
            }
            if (!sim_transcript.empty()) {
                cfg.transcript_out = sim_transcript;
            }
            return run_one(cfg, 0, cfg.transcript_out);
        }
        if (bench->parsed()) {
            auto cfg = load_config(bench_config);
            if (bench_seed) {
                cfg.master_seed = *bench_seed;
            }
            if (!bench_out.empty()) {
                cfg.out = bench_out;
            }
            auto batch = bcc::harness::run_batch(cfg);
            if (!cfg.out.empty()) {
                auto out = open_out(cfg.out);
                bcc::harness::write_csv(out, batch.records);
            } else {
                bcc::harness::write_csv(std::cout, batch.records);
            }
            print_summary(cfg, batch);
            return 0;
        }
        if (estimate->parsed()) {
            auto cfg = load_config(est_config);
            cfg.protocol = "estimation";
            if (est_seed) {
                cfg.master_seed = *est_seed;
            }
            if (!est_out.empty()) {
                cfg.out = est_out;
            }
            auto batch = bcc::harness::run_batch(cfg);
            if (!cfg.out.empty()) {
                auto out = open_out(cfg.out);
                bcc::harness::write_csv(out, batch.records);
            } else {
                bcc::harness::write_csv(std::cout, batch.records);
            }
            print_summary(cfg, batch);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
