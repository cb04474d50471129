// Copyright 2026 The sparql2q Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <string>

#include "sparql2q/kg.h"
#include "sparql2q/rng.h"
#include "sparql2q/sparql.h"

namespace sparql2q {
namespace {

const char *kQuery =
    "PREFIX ns: <http://rdf.freebase.com/ns/> SELECT DISTINCT ?x WHERE { "
    "ns:m.a0 ns:film.actor.film ?y . ?y ns:film.performance.film ?x . "
    "?x ns:film.film.runtime ?num . FILTER (?num > 90) } ORDER BY DESC(?num) LIMIT 1";

void BM_ParseQuery(benchmark::State &state) {
  for (auto _ : state) benchmark::DoNotOptimize(ParseQuery(kQuery));
}
BENCHMARK(BM_ParseQuery);

void BM_PrintQuery(benchmark::State &state) {
  SparqlQuery q = ParseQuery(kQuery);
  for (auto _ : state) benchmark::DoNotOptimize(PrintQuery(q));
}
BENCHMARK(BM_PrintQuery);

// Actors with `films` performances each; the query joins three patterns.
void BM_Evaluate(benchmark::State &state) {
  const int actors = 50;
  const int films = static_cast<int>(state.range(0));
  KnowledgeGraph kg;
  Rng rng(1);
  for (int a = 0; a < actors; ++a) {
    std::string actor = "m.a" + std::to_string(a);
    for (int f = 0; f < films; ++f) {
      std::string perf = "m.p" + std::to_string(a) + "_" + std::to_string(f);
      std::string film = "m.f" + std::to_string(rng.Uniform(actors * films / 2));
      kg.AddTriple({actor, "film.actor.film", perf});
      kg.AddTriple({perf, "film.performance.film", film});
      kg.AddTriple({film, "film.film.runtime",
                    "\"" + std::to_string(60 + rng.Uniform(90)) + "\"^^xsd:integer"});
    }
  }
  SparqlQuery q = ParseQuery(kQuery);
  for (auto _ : state) benchmark::DoNotOptimize(Evaluate(q, kg));
  state.SetComplexityN(films);
}
BENCHMARK(BM_Evaluate)->Arg(10)->Arg(100)->Arg(1000);

}  // namespace
}  // namespace sparql2q
