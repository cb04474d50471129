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

#ifndef SPARQL2Q_TESTS_SUPPORT_FIXTURES_H_
#define SPARQL2Q_TESTS_SUPPORT_FIXTURES_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "sparql2q/kg.h"
#include "sparql2q/pipeline.h"

namespace sparql2q::testing {

// Absolute path of a file under tests/data.
std::string DataPath(const std::string &relative);

std::string ReadFile(const std::filesystem::path &path);
void WriteFile(const std::filesystem::path &path, const std::string &content);
std::vector<std::string> ReadLines(const std::filesystem::path &path);

// Unique directory removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir &) = delete;
  TempDir &operator=(const TempDir &) = delete;

  const std::filesystem::path &path() const { return path_; }
  std::string File(const std::string &name) const;

 private:
  std::filesystem::path path_;
};

// A loopback TCP port with nothing listening on it.
int UnusedPort();

// Paths of a knowledge graph on disk.
struct GraphFiles {
  std::string triples;
  std::string entities;
  std::string catalog;
};

// The small hand-written graph under tests/data/figure.
GraphFiles FigureFiles();
KnowledgeGraph LoadFigureGraph();

// Generated film graph: `actors` actors, each with `films_per_actor` film
// performances (CVT nodes with film and character), a birthplace among
// `cities` cities, and integer runtimes on every film.
struct FilmWorld {
  size_t actors = 15;
  size_t films_per_actor = 12;
  size_t cities = 4;
};

GraphFiles WriteFilmWorld(const std::filesystem::path &dir,
                          const FilmWorld &world);
std::string ActorId(size_t i);
std::string ActorName(size_t i);

// Dataset over the film world mixing single-relation, CVT, ORDER BY, COUNT
// and two-entity queries; `items` records in total.
std::vector<DatasetItem> FilmDataset(const FilmWorld &world, size_t items);
std::string WriteDataset(const std::filesystem::path &path,
                         const std::vector<DatasetItem> &items);

}  // namespace sparql2q::testing

#endif  // SPARQL2Q_TESTS_SUPPORT_FIXTURES_H_
