#include <benchmark/benchmark.h>

#include <random>

#include "segsynth/mask_ops.hpp"
#include "segsynth/mock_backend.hpp"
#include "segsynth/visual_prior.hpp"

using namespace segsynth;

namespace {

RgbImage noise_image(Size size, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    RgbImage img(size);
    for (auto& v : img.values()) v = static_cast<std::uint8_t>(rng() & 0xFF);
    return img;
}

BinaryMask disc_mask(Size size, int cx, int cy, int r, int class_id) {
    BinaryMask m{GrayImage(size, 0), class_id};
    for (int y = 0; y < size.height; ++y)
        for (int x = 0; x < size.width; ++x)
            m.data.at(x, y) = (x - cx) * (x - cx) + (y - cy) * (y - cy) < r * r ? 1 : 0;
    return m;
}

void BM_Composite(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Size size{n, n};
    const auto base = noise_image(size, 1);
    std::vector<std::pair<RgbImage, BinaryMask>> patches;
    patches.emplace_back(noise_image(size, 2), disc_mask(size, n / 4, n / 4, n / 5, 1));
    patches.emplace_back(noise_image(size, 3), disc_mask(size, 3 * n / 4, 3 * n / 4, n / 5, 2));
    for (auto _ : state) benchmark::DoNotOptimize(composite(base, patches));
    state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_Composite)->Arg(256)->Arg(1024);

void BM_Dilate(benchmark::State& state) {
    const auto mask = disc_mask({512, 512}, 256, 256, 100, 1);
    const int r = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(dilate(mask, r));
}
BENCHMARK(BM_Dilate)->Arg(2)->Arg(8)->Arg(32);

void BM_Edges(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto img = noise_image({n, n}, 4);
    for (auto _ : state) benchmark::DoNotOptimize(edges_from_image(img, EdgeParams{}));
    state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_Edges)->Arg(128)->Arg(512);

void BM_ResizeBilinear(benchmark::State& state) {
    const auto img = noise_image({500, 375}, 5);
    for (auto _ : state) benchmark::DoNotOptimize(resize_bilinear(img, {1024, 1024}));
}
BENCHMARK(BM_ResizeBilinear);

void BM_MockImg2Img(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    MockBackend mock;
    Img2ImgRequest req;
    req.image = noise_image({n, n}, 6);
    req.prior = VisualPrior{Raster<float, 1>({n, n}, 0.25f), PriorSource::Blended};
    req.prompt = build_simple_prompt({"dog"});
    req.output = {n, n};
    for (auto _ : state) benchmark::DoNotOptimize(mock.img2img(req));
}
BENCHMARK(BM_MockImg2Img)->Arg(256)->Arg(1024);

}  // namespace
BENCHMARK_MAIN();
