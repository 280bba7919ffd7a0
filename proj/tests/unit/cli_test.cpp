#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "segsynth/dataset_io.hpp"
#include "segsynth/digest.hpp"
#include "segsynth/image_codec.hpp"
#include "segsynth/pipeline.hpp"
#include "segsynth/qa.hpp"
#include "test_support.hpp"
#include "toy_dataset.hpp"

using namespace segsynth;
using namespace segsynth::testing;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

class CliData : public ::testing::Test {
  protected:
    void SetUp() override {
        toy::ToyOptions opt;
        opt.samples = 4;
        opt.width = opt.height = 64;
        toy::write_toy_dataset(data_.path(), opt);
    }
    std::vector<std::string> generate_args(std::vector<std::string> extra = {}) const {
        std::vector<std::string> args{"generate",         "--data-root", data_.path().string(), "--out-root",
                                      out_.path().string(), "--gen-resolution", "64x64"};
        args.insert(args.end(), extra.begin(), extra.end());
        return args;
    }

    TempDir data_, out_;
};

}  // namespace

TEST_F(CliData, GenerateWithMockWritesBothPaths) {
    const auto r = invoke(generate_args());
    ASSERT_EQ(r.code, cli::kSuccess) << r.err;
    EXPECT_NE(r.out.find("d1 written:      4"), std::string::npos) << r.out;
    const auto entries = load_manifest(out_ / kManifestFile);
    EXPECT_EQ(entries.size(), 8u);
    for (const auto& e : entries) {
        EXPECT_EQ(sha256_file(out_ / e.label_path), sha256_file(data_ / "labels" / (e.source_id + ".png")));
    }

    const auto v = invoke({"verify", "--out-root", out_.path().string()});
    EXPECT_EQ(v.code, cli::kSuccess) << v.err;
    EXPECT_TRUE(fs::exists(out_ / kQaReportFile));
    EXPECT_NE(v.out.find("failures:                 0"), std::string::npos) << v.out;
}

TEST_F(CliData, PathsFlagLimitsOutput) {
    const auto r = invoke(generate_args({"--paths", "d2"}));
    ASSERT_EQ(r.code, cli::kSuccess) << r.err;
    const auto entries = load_manifest(out_ / kManifestFile);
    EXPECT_EQ(entries.size(), 4u);
    for (const auto& e : entries) EXPECT_EQ(e.path_tag, PathTag::D2);
}

TEST_F(CliData, UnreachableBackendExitsWithTransportCode) {
    const auto r = invoke(generate_args({"--backend", "http://127.0.0.1:1"}));
    EXPECT_EQ(r.code, cli::kTransportError);
    EXPECT_NE(r.err.find("serve-mock"), std::string::npos) << r.err;
}

TEST_F(CliData, FlagBeatsFileBeatsDefault) {
    const auto config = data_ / "run.json";
    std::ofstream(config) << R"({"alpha": 0.5, "run_seed": 3, "variants_per_image": 1})";
    const auto r = invoke(generate_args({"--config", config.string(), "--alpha", "0.3", "--paths", "d1"}));
    ASSERT_EQ(r.code, cli::kSuccess) << r.err;
    std::ifstream in(out_ / kRunConfigFile);
    const auto recorded = nlohmann::json::parse(in);
    EXPECT_DOUBLE_EQ(recorded["alpha"].get<double>(), 0.3);
    EXPECT_EQ(recorded["run_seed"].get<std::uint64_t>(), 3u);
    EXPECT_DOUBLE_EQ(recorded["class_weight"].get<double>(), 1.21);
}

TEST_F(CliData, BadConfigValuesExitTwo) {
    EXPECT_EQ(invoke(generate_args({"--alpha", "2"})).code, cli::kConfigError);
    EXPECT_EQ(invoke(generate_args({"--gen-resolution", "63x64"})).code, cli::kConfigError);
    const auto config = data_ / "bad.json";
    std::ofstream(config) << R"({"alfa": 0.5})";
    const auto r = invoke(generate_args({"--config", config.string()}));
    EXPECT_EQ(r.code, cli::kConfigError);
    EXPECT_NE(r.err.find("alfa"), std::string::npos);
}

TEST_F(CliData, PriorWithAlphaZeroEqualsLabelPrior) {
    const auto out = out_ / "priors";
    const auto r = invoke({"prior", "--image", (data_ / "images/toy_000.png").string(), "--label",
                           (data_ / "labels/toy_000.png").string(), "--alpha", "0", "--out", out.string()});
    ASSERT_EQ(r.code, cli::kSuccess) << r.err;
    EXPECT_EQ(read_file(out / "prior_blended.png"), read_file(out / "prior_label.png"));
    EXPECT_NE(read_file(out / "prior_image.png"), read_file(out / "prior_label.png"));
}

TEST(Cli, PromptRendering) {
    auto r = invoke({"prompt", "--classes", "dog,cat", "--caption", "a dog"});
    ASSERT_EQ(r.code, cli::kSuccess);
    EXPECT_EQ(r.out, "a dog, cat\na (dog)++, (cat)++\n");
    r = invoke({"prompt", "--classes", "dog,cat", "--caption", "a dog", "--weight", "1.0"});
    EXPECT_EQ(r.out, "a dog, cat\na dog, cat\n");
    r = invoke({"prompt", "--classes", "bus"});
    EXPECT_EQ(r.out, "A photograph of bus\nA photograph of (bus)++\n");
}

TEST(Cli, UsageErrorsExitTwo) {
    EXPECT_EQ(invoke({}).code, cli::kConfigError);
    EXPECT_EQ(invoke({"generate", "--no-such-flag"}).code, cli::kConfigError);
    EXPECT_EQ(invoke({"frobnicate"}).code, cli::kConfigError);
    const auto r = invoke({"generate"});
    EXPECT_EQ(r.code, cli::kConfigError);
    EXPECT_NE(r.err.find("data_root"), std::string::npos) << r.err;
}

TEST(Cli, HelpExitsZero) {
    const auto r = invoke({"--help"});
    EXPECT_EQ(r.code, cli::kSuccess);
    EXPECT_NE(r.out.find("generate"), std::string::npos);
}
