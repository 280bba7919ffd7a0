#include <iostream>

#include <CLI11.hpp>

#include "toy_dataset.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Write a small synthetic VOC-layout dataset for trying the pipeline"};
    std::string out;
    segsynth::toy::ToyOptions options;
    app.add_option("out", out, "Dataset root to create")->required();
    app.add_option("--samples", options.samples, "Number of samples")->check(CLI::PositiveNumber);
    app.add_option("--width", options.width, "Image width")->check(CLI::PositiveNumber);
    app.add_option("--height", options.height, "Image height")->check(CLI::PositiveNumber);
    app.add_option("--seed", options.seed, "Random seed");
    app.add_option("--empty", options.empty_samples, "Trailing samples without any class");
    CLI11_PARSE(app, argc, argv);
    try {
        segsynth::toy::write_toy_dataset(out, options);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    std::cout << "wrote " << options.samples << " samples to " << out << "\n";
    return 0;
}
