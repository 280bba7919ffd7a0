#include "cli.hpp"

#include <csignal>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <pthread.h>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "segsynth/dataset_io.hpp"
#include "segsynth/http_backend.hpp"
#include "segsynth/mock_backend.hpp"
#include "segsynth/pipeline.hpp"
#include "segsynth/qa.hpp"
#include "segsynth/wire_server.hpp"

namespace fs = std::filesystem;

namespace segsynth::cli {
namespace {

struct GenerateFlags {
    std::string config_path;
    std::optional<std::string> data_root;
    std::optional<std::string> out_root;
    std::optional<std::string> backend;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> paths;
    std::optional<int> variants;
    std::optional<double> alpha;
    std::optional<double> class_weight;
    std::optional<int> parallelism;
    std::optional<std::string> layout;
    std::optional<std::string> class_map;
    std::optional<std::string> caption_source;
    std::optional<std::string> resolution;
};

struct VerifyFlags {
    std::string out_root;
    std::optional<std::string> data_root;
    std::optional<std::string> layout;
    std::optional<std::string> class_map;
};

struct PriorFlags {
    std::string image;
    std::string label;
    std::string out;
    std::string config_path;
    std::optional<double> alpha;
    std::optional<int> boundary_width;
    std::optional<std::string> layout;
    std::optional<std::string> class_map;
};

struct PromptFlags {
    std::string caption;
    std::string classes;
    double weight = kDefaultClassWeight;
};

struct ServeFlags {
    std::string host = "127.0.0.1";
    int port = 8080;
};

Size parse_resolution(const std::string& text) {
    const auto x = text.find('x');
    try {
        if (x == std::string::npos) throw std::invalid_argument(text);
        return Size{std::stoi(text.substr(0, x)), std::stoi(text.substr(x + 1))};
    } catch (const std::exception&) {
        throw ConfigError("--gen-resolution expects WxH, got '" + text + "'");
    }
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        const auto first = item.find_first_not_of(' ');
        if (first == std::string::npos) continue;
        out.push_back(item.substr(first, item.find_last_not_of(' ') - first + 1));
    }
    return out;
}

std::unique_ptr<GenerationBackend> make_backend(const PipelineConfig& config) {
    if (config.backend == "mock") {
        return std::make_unique<MockBackend>();
    }
    HttpBackendOptions options;
    options.max_in_flight = config.parallelism;
    return std::make_unique<HttpBackend>(config.backend, options);
}

}  // namespace

/// Layers defaults, the config file and flags, in that order of increasing precedence.
static PipelineConfig resolve_generate_config(const GenerateFlags& f) {
    PipelineConfig c;
    if (!f.config_path.empty()) {
        c = load_config_file(f.config_path, c);
    }
    if (f.data_root) c.data_root = *f.data_root;
    if (f.out_root) c.out_root = *f.out_root;
    if (f.backend) c.backend = *f.backend;
    if (f.seed) c.run_seed = *f.seed;
    if (f.paths) c.paths = parse_paths(*f.paths);
    if (f.variants) c.variants_per_image = *f.variants;
    if (f.alpha) c.alpha = *f.alpha;
    if (f.class_weight) c.class_weight = *f.class_weight;
    if (f.parallelism) c.parallelism = *f.parallelism;
    if (f.layout) c.layout = parse_layout(*f.layout);
    if (f.class_map) c.class_map = *f.class_map;
    if (f.caption_source) c.caption_source = parse_caption_source(*f.caption_source);
    if (f.resolution) c.gen_resolution = parse_resolution(*f.resolution);
    c.validate();
    if (c.data_root.empty()) throw ConfigError("config field 'data_root': required (--data-root)");
    if (c.out_root.empty()) throw ConfigError("config field 'out_root': required (--out-root)");
    return c;
}

namespace {

int cmd_generate(const GenerateFlags& flags, std::ostream& out, std::ostream& err) {
    const PipelineConfig config = resolve_generate_config(flags);
    const ClassMap class_map = ClassMap::resolve(config.class_map);
    if (!fs::is_directory(config.data_root)) {
        throw ConfigError("config field 'data_root': directory does not exist: " + config.data_root);
    }
    LoadResult loaded;
    try {
        loaded = load_dataset(config.data_root, config.layout, class_map);
    } catch (const IoError& e) {
        throw ConfigError(e.what());
    }
    for (const auto& issue : loaded.issues) {
        err << "load: " << issue.id << ": " << issue.message << "\n";
    }
    auto backend = make_backend(config);
    RunReport report;
    try {
        report = run(config, loaded.samples, class_map, *backend, config.out_root);
    } catch (const TransportError& e) {
        err << "error: backend " << config.backend << " unreachable: " << e.what() << "\n"
            << "hint: start the worker, or run `segsynth serve-mock --port <port>` for a local mock\n";
        return kTransportError;
    }
    for (const auto& e : report.errors) {
        err << e.path << ": " << e.sample_id << ": " << e.message << "\n";
    }
    out << "samples:         " << report.samples << "\n"
        << "d1 written:      " << report.d1_ok << "\n"
        << "d2 written:      " << report.d2_ok << "\n"
        << "d2 skipped:      " << report.d2_skipped << "\n"
        << "failed:          " << report.failed << "\n"
        << "class failures:  " << report.class_failures << "\n"
        << "label mismatch:  " << report.label_mismatches << "\n"
        << "load issues:     " << loaded.issues.size() << "\n"
        << "manifest:        " << report.manifest_path.generic_string() << "\n"
        << "config digest:   " << report.config_digest << "\n"
        << "wall seconds:    " << report.wall_seconds << "\n";
    return report.ok() && loaded.issues.empty() ? kSuccess : kGenerationFailures;
}

int cmd_verify(const VerifyFlags& flags, std::ostream& out, std::ostream& err) {
    PipelineConfig recorded;
    const fs::path recorded_path = fs::path(flags.out_root) / kRunConfigFile;
    if (fs::is_regular_file(recorded_path)) {
        recorded = load_config_file(recorded_path);
    }
    const std::string data_root = flags.data_root.value_or(recorded.data_root);
    if (data_root.empty()) {
        throw ConfigError("--data-root is required (no run_config.json found in " + flags.out_root + ")");
    }
    const DatasetLayout layout = flags.layout ? parse_layout(*flags.layout) : recorded.layout;
    const ClassMap class_map = ClassMap::resolve(flags.class_map.value_or(recorded.class_map));
    QAReport report;
    try {
        report = verify_run(flags.out_root, data_root, layout, class_map);
    } catch (const IoError& e) {
        throw ConfigError(e.what());
    }
    write_qa_report(flags.out_root, report);
    for (const auto& e : report.entries) {
        if (e.ok()) continue;
        err << "FAIL " << e.synthetic_id << ":";
        for (const auto& n : e.notes) err << " " << n << ";";
        err << "\n";
    }
    out << "entries checked:          " << report.entries.size() << "\n"
        << "failures:                 " << report.failures() << "\n"
        << "mean abs pixel diff (d1): " << report.mean_abs_pixel_diff_d1 << "\n"
        << "changed pixel ratio (d2): " << report.changed_pixel_ratio_d2 << "\n"
        << "report:                   " << (fs::path(flags.out_root) / kQaReportFile).generic_string() << "\n";
    return report.ok() ? kSuccess : kGenerationFailures;
}

int cmd_prior(const PriorFlags& flags, std::ostream& out, std::ostream&) {
    PipelineConfig config;
    if (!flags.config_path.empty()) config = load_config_file(flags.config_path, config);
    if (flags.alpha) config.alpha = *flags.alpha;
    if (flags.boundary_width) config.boundary_width = *flags.boundary_width;
    if (flags.layout) config.layout = parse_layout(*flags.layout);
    if (flags.class_map) config.class_map = *flags.class_map;
    config.validate();
    const ClassMap class_map = ClassMap::resolve(config.class_map);

    const RgbImage image = read_rgb(flags.image);
    const LabelMask label = read_label(flags.label, config.layout, class_map);
    require_same_size(image.size(), label.size(), "image vs label");
    const VisualPrior vi = edges_from_image(image, config.edge_params);
    const VisualPrior vs = prior_from_label(label, class_map, config.boundary_width);
    const VisualPrior blended = blend(vi, vs, config.alpha);

    const fs::path dir(flags.out);
    fs::create_directories(dir);
    write_png(dir / "prior_image.png", prior_to_gray(vi));
    write_png(dir / "prior_label.png", prior_to_gray(vs));
    write_png(dir / "prior_blended.png", prior_to_gray(blended));
    out << (dir / "prior_image.png").generic_string() << "\n"
        << (dir / "prior_label.png").generic_string() << "\n"
        << (dir / "prior_blended.png").generic_string() << "\n";
    return kSuccess;
}

int cmd_prompt(const PromptFlags& flags, std::ostream& out, std::ostream&) {
    const PromptSpec spec = build_class_aware_prompt(flags.caption, split_list(flags.classes), flags.weight);
    out << spec.plain_text() << "\n" << render_weighted_syntax(spec) << "\n";
    return kSuccess;
}

int cmd_serve(const ServeFlags& flags, std::ostream& out, std::ostream&) {
    // SIGINT/SIGTERM are consumed by a sigwait thread so the server shuts down cleanly
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    MockBackend backend;
    WireServer server(backend);
    const int port = server.bind(flags.host, flags.port);
    out << "serving mock backend on http://" << flags.host << ":" << port << std::endl;
    std::thread waiter([&] {
        int sig = 0;
        sigwait(&signals, &sig);
        server.stop();
    });
    server.listen();
    pthread_kill(waiter.native_handle(), SIGTERM);
    waiter.join();
    return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Synthetic segmentation data generation: guided regeneration (d1) and per-class inpainting (d2)",
                 "segsynth"};
    app.require_subcommand(1);

    GenerateFlags gen;
    auto* generate = app.add_subcommand("generate", "Generate d1/d2 synthetic datasets from a real dataset");
    generate->add_option("--config", gen.config_path, "JSON configuration file")->check(CLI::ExistingFile);
    generate->add_option("--data-root", gen.data_root, "Dataset root with images/ and labels/ (data_root)");
    generate->add_option("--out-root", gen.out_root, "Output root (out_root)");
    generate->add_option("--backend", gen.backend, "'mock' or worker URL (backend)");
    generate->add_option("--seed", gen.seed, "Run seed (run_seed)");
    generate->add_option("--paths", gen.paths, "d1, d2 or both (paths)");
    generate->add_option("--variants", gen.variants, "Synthetic variants per image (variants_per_image)");
    generate->add_option("--alpha", gen.alpha, "Prior blending coefficient (alpha)");
    generate->add_option("--class-weight", gen.class_weight, "Class token weight (class_weight)");
    generate->add_option("--parallelism", gen.parallelism, "Samples in flight (parallelism)");
    generate->add_option("--layout", gen.layout, "voc-indexed or binary-masks (layout)");
    generate->add_option("--class-map", gen.class_map, "voc, binary or class-map JSON path (class_map)");
    generate->add_option("--caption-source", gen.caption_source, "auto, sidecar, backend or none (caption_source)");
    generate->add_option("--gen-resolution", gen.resolution, "Backend resolution WxH (gen_resolution)");

    VerifyFlags ver;
    auto* verify = app.add_subcommand("verify", "Re-check a generated run from disk");
    verify->add_option("--out-root", ver.out_root, "Output root of the run")->required();
    verify->add_option("--data-root", ver.data_root, "Source dataset root (defaults to the recorded run config)");
    verify->add_option("--layout", ver.layout, "voc-indexed or binary-masks");
    verify->add_option("--class-map", ver.class_map, "voc, binary or class-map JSON path");

    PriorFlags pri;
    auto* prior = app.add_subcommand("prior", "Write the image, label and blended priors as grayscale PNGs");
    prior->add_option("--image", pri.image, "Source image")->required()->check(CLI::ExistingFile);
    prior->add_option("--label", pri.label, "Source label")->required()->check(CLI::ExistingFile);
    prior->add_option("--out", pri.out, "Output directory")->required();
    prior->add_option("--config", pri.config_path, "JSON configuration file")->check(CLI::ExistingFile);
    prior->add_option("--alpha", pri.alpha, "Blending coefficient");
    prior->add_option("--boundary-width", pri.boundary_width, "Label outline width in pixels");
    prior->add_option("--layout", pri.layout, "voc-indexed or binary-masks");
    prior->add_option("--class-map", pri.class_map, "voc, binary or class-map JSON path");

    PromptFlags pro;
    auto* prompt = app.add_subcommand("prompt", "Print the class-aware prompt as plain text and weighted syntax");
    prompt->add_option("--caption", pro.caption, "Caption text (empty for the class-list prompt)");
    prompt->add_option("--classes", pro.classes, "Comma separated class names")->required();
    prompt->add_option("--weight", pro.weight, "Class token weight");

    ServeFlags srv;
    auto* serve = app.add_subcommand("serve-mock", "Serve the deterministic mock over the HTTP protocol");
    serve->add_option("--port", srv.port, "Port (0 picks a free one)");
    serve->add_option("--host", srv.host, "Bind address");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        for (auto* sub : app.get_subcommands()) {
            err << sub->help();
        }
        return kConfigError;
    }

    try {
        if (generate->parsed()) return cmd_generate(gen, out, err);
        if (verify->parsed()) return cmd_verify(ver, out, err);
        if (prior->parsed()) return cmd_prior(pri, out, err);
        if (prompt->parsed()) return cmd_prompt(pro, out, err);
        if (serve->parsed()) return cmd_serve(srv, out, err);
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << "\n";
        return kConfigError;
    } catch (const TransportError& e) {
        err << "transport error: " << e.what() << "\n";
        return kTransportError;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kGenerationFailures;
    }
    return kConfigError;
}

}  // namespace segsynth::cli
