#include "threeform/classify.hpp"
#include "threeform/field.hpp"
#include "threeform/random.hpp"

#include <benchmark/benchmark.h>

using namespace threeform;

namespace {

std::vector<Form<Rational>> sample_forms(int n) {
  SplitMix64 rng(1);
  std::vector<Form<Rational>> out;
  for (int i = 0; i < n; ++i) out.push_back(random_form(rng, 3));
  return out;
}

void BM_Invariants(benchmark::State& state) {
  auto forms = sample_forms(64);
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& phi = forms[i++ % forms.size()];
    benchmark::DoNotOptimize(K_of(phi));
    benchmark::DoNotOptimize(F_of(phi));
    benchmark::DoNotOptimize(Q_of(phi));
  }
}
BENCHMARK(BM_Invariants);

void BM_InvariantsFloat(benchmark::State& state) {
  std::vector<Form<double>> forms;
  for (const auto& f : sample_forms(64)) forms.push_back(f.map([](const Rational& x) { return to_double(x); }));
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& phi = forms[i++ % forms.size()];
    benchmark::DoNotOptimize(K_of(phi));
    benchmark::DoNotOptimize(Q_of(phi));
  }
}
BENCHMARK(BM_InvariantsFloat);

void BM_SpClassify(benchmark::State& state) {
  SplitMix64 rng(2);
  auto frame = SymplecticFrame<Rational>::standard();
  std::vector<Form<Rational>> forms;
  for (int i = 0; i < 64; ++i) forms.push_back(random_primitive(rng, frame));
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sp_classify(frame, forms[i++ % forms.size()]));
}
BENCHMARK(BM_SpClassify);

void BM_Nijenhuis(benchmark::State& state) {
  SplitMix64 rng(3);
  auto omega = SymplecticFrame<Rational>::standard_omega();
  FormField phi = random_primitive_field(rng, omega, 2, 2, 0.3);
  EndoField k = K_field(phi);
  VectorField x = random_vector_field(rng, 2, 2), y = random_vector_field(rng, 2, 2);
  std::optional<FormField> w(constant_field(omega));
  for (auto _ : state) benchmark::DoNotOptimize(nijenhuis(k, x, y, random_point(rng), w));
}
BENCHMARK(BM_Nijenhuis)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
