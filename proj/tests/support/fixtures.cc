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

#include "support/fixtures.h"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <chrono>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "sparql2q/rng.h"

namespace sparql2q::testing {
namespace fs = std::filesystem;

std::string DataPath(const std::string &relative) {
  return (fs::path(SPARQL2Q_TEST_DATA) / relative).string();
}

std::string ReadFile(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteFile(const fs::path &path, const std::string &content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

std::vector<std::string> ReadLines(const fs::path &path) {
  std::istringstream in(ReadFile(path));
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

TempDir::TempDir() {
  static uint64_t counter = 0;
  Rng rng(static_cast<uint64_t>(
              std::chrono::steady_clock::now().time_since_epoch().count()) ^
          (++counter << 32));
  for (;;) {
    fs::path candidate =
        fs::temp_directory_path() / ("sparql2q-test-" + std::to_string(rng.Next()));
    if (fs::create_directory(candidate)) {
      path_ = candidate;
      return;
    }
  }
}

TempDir::~TempDir() {
  std::error_code ignored;
  fs::remove_all(path_, ignored);
}

std::string TempDir::File(const std::string &name) const {
  return (path_ / name).string();
}

int UnusedPort() {
  int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) throw std::runtime_error("socket failed");
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = 0;
  socklen_t len = sizeof(addr);
  if (::bind(fd, reinterpret_cast<sockaddr *>(&addr), sizeof(addr)) != 0 ||
      ::getsockname(fd, reinterpret_cast<sockaddr *>(&addr), &len) != 0) {
    ::close(fd);
    throw std::runtime_error("bind failed");
  }
  ::close(fd);
  return ntohs(addr.sin_port);
}

GraphFiles FigureFiles() {
  return {DataPath("figure/triples.tsv"), DataPath("figure/entities.jsonl"),
          DataPath("figure/catalog.tsv")};
}

KnowledgeGraph LoadFigureGraph() {
  GraphFiles f = FigureFiles();
  return LoadKnowledgeGraph(f.triples, f.entities, f.catalog);
}

std::string ActorId(size_t i) { return "m.actor" + std::to_string(i); }
std::string ActorName(size_t i) { return "Actor Number " + std::to_string(i); }

namespace {

std::string FilmId(size_t a, size_t f) {
  return "m.film" + std::to_string(a) + "_" + std::to_string(f);
}
std::string PerformanceId(size_t a, size_t f) {
  return "m.perf" + std::to_string(a) + "_" + std::to_string(f);
}
std::string CharacterId(size_t a, size_t f) {
  return "m.char" + std::to_string(a) + "_" + std::to_string(f);
}
std::string CityId(size_t c) { return "m.city" + std::to_string(c); }

std::string EntityLine(const std::string &id, const std::string &name,
                       const std::string &description, const std::string &type) {
  return "{\"id\": \"" + id + "\", \"name\": \"" + name +
         "\", \"description\": \"" + description + "\", \"types\": [\"" + type +
         "\"]}\n";
}

}  // namespace

GraphFiles WriteFilmWorld(const fs::path &dir, const FilmWorld &world) {
  std::string triples, entities;
  for (size_t c = 0; c < world.cities; ++c) {
    entities += EntityLine(CityId(c), "City " + std::to_string(c),
                           "City " + std::to_string(c) + " is a city .",
                           "location.citytown");
  }
  for (size_t a = 0; a < world.actors; ++a) {
    entities += EntityLine(ActorId(a), ActorName(a),
                           ActorName(a) + " is an actor .", "film.actor");
    triples += ActorId(a) + "\tpeople.person.place_of_birth\t" +
               CityId(a % world.cities) + "\n";
    for (size_t f = 0; f < world.films_per_actor; ++f) {
      std::string film_name =
          "Film " + std::to_string(a) + " " + std::to_string(f);
      std::string char_name =
          "Character " + std::to_string(a) + " " + std::to_string(f);
      entities += EntityLine(FilmId(a, f), film_name,
                             film_name + " is a film .", "film.film");
      entities += EntityLine(CharacterId(a, f), char_name, "",
                             "film.film_character");
      entities += EntityLine(PerformanceId(a, f), "", "", "film.performance");
      triples += ActorId(a) + "\tfilm.actor.film\t" + PerformanceId(a, f) + "\n";
      triples += PerformanceId(a, f) + "\tfilm.performance.film\t" + FilmId(a, f) + "\n";
      triples += PerformanceId(a, f) + "\tfilm.performance.character\t" +
                 CharacterId(a, f) + "\n";
      triples += FilmId(a, f) + "\tfilm.film.runtime\t\"" +
                 std::to_string(80 + (a * 7 + f * 13) % 60) + "\"^^xsd:integer\n";
    }
  }
  std::string catalog =
      "people.person.place_of_birth\tsingle\n"
      "film.actor.film\tcvt\n"
      "film.performance.film\tsingle\n"
      "film.performance.character\tsingle\n"
      "film.film.runtime\tsingle\n";
  GraphFiles files{(dir / "triples.tsv").string(), (dir / "entities.jsonl").string(),
                   (dir / "catalog.tsv").string()};
  WriteFile(files.triples, triples);
  WriteFile(files.entities, entities);
  WriteFile(files.catalog, catalog);
  return files;
}

std::vector<DatasetItem> FilmDataset(const FilmWorld &world, size_t items) {
  const std::string ns = "PREFIX ns: <http://rdf.freebase.com/ns/> ";
  std::vector<DatasetItem> out;
  for (size_t i = 0; i < items; ++i) {
    size_t a = i % world.actors;
    std::string actor = "ns:" + ActorId(a);
    DatasetItem item;
    item.id = "q" + std::to_string(i);
    item.split = i % 5 == 0 ? DatasetSplit::kTest : DatasetSplit::kTrain;
    switch (i % 5) {
      case 0:
        item.sparql = ns + "SELECT DISTINCT ?x WHERE { " + actor +
                      " ns:people.person.place_of_birth ?x . }";
        item.question = "Where was " + ActorName(a) + " born?";
        break;
      case 1:
        item.sparql = ns + "SELECT DISTINCT ?x WHERE { " + actor +
                      " ns:film.actor.film ?y . ?y ns:film.performance.film ?x . }";
        item.question = "What films did " + ActorName(a) + " star in?";
        break;
      case 2:
        item.sparql = ns + "SELECT DISTINCT ?x WHERE { " + actor +
                      " ns:film.actor.film ?y . ?y ns:film.performance.film ?x . "
                      "?x ns:film.film.runtime ?num . } ORDER BY DESC(?num) LIMIT 1";
        item.question = "What is the longest film of " + ActorName(a) + "?";
        break;
      case 3:
        item.sparql = ns + "SELECT (COUNT(DISTINCT ?x) AS ?count) WHERE { " + actor +
                      " ns:film.actor.film ?y . ?y ns:film.performance.film ?x . }";
        item.question = "How many films did " + ActorName(a) + " star in?";
        break;
      default: {
        size_t f = i % world.films_per_actor;
        item.sparql = ns + "SELECT DISTINCT ?x WHERE { " + actor +
                      " ns:film.actor.film ?y . ?y ns:film.performance.character ns:" +
                      CharacterId(a, f) + " . ?y ns:film.performance.film ?x . }";
        item.question = "In which film did " + ActorName(a) + " play Character " +
                        std::to_string(a) + " " + std::to_string(f) + "?";
        break;
      }
    }
    out.push_back(std::move(item));
  }
  return out;
}

std::string WriteDataset(const fs::path &path, const std::vector<DatasetItem> &items) {
  std::string text;
  for (const DatasetItem &item : items) text += ItemToJson(item) + "\n";
  WriteFile(path, text);
  return path.string();
}

}  // namespace sparql2q::testing
