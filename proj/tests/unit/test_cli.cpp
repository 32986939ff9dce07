/*
 * Copyright 2026 The occfield Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace {

namespace fs = std::filesystem;

#ifndef OCCFIELD_CLI_PATH
#define OCCFIELD_CLI_PATH ""
#endif

const std::string kCli = OCCFIELD_CLI_PATH;

int run(const std::string& args) {
  const int status = std::system((kCli + " " + args + " > /dev/null 2>&1").c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / "occfield_cli_test";
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

TEST_CASE("cli help and exit codes") {
  REQUIRE(fs::exists(kCli));
  CHECK(run("--help") == 0);
  for (const char* sub : {"simulate", "train", "map", "roc", "info"}) {
    CHECK(run(std::string(sub) + " --help") == 0);
  }
  CHECK(run("--no-such-flag") == 1);
  CHECK(run("simulate") == 1);                    // missing required --out
  CHECK(run("map --out x.pgm --scans /nonexistent/scans.txt") == 2);
}

TEST_CASE("cli pipeline is byte-deterministic") {
  TempDir tmp;
  const std::string env_a = (tmp.path / "a").string();
  const std::string env_b = (tmp.path / "b").string();
  REQUIRE(run("simulate --seed 7 --out " + env_a) == 0);
  REQUIRE(run("simulate --seed 7 --out " + env_b) == 0);
  for (const char* name : {"env.txt", "trajectory.txt", "scans.txt"}) {
    CHECK(slurp(fs::path(env_a) / name) == slurp(fs::path(env_b) / name));
  }
  // A different seed must change the world.
  const std::string env_c = (tmp.path / "c").string();
  REQUIRE(run("simulate --seed 8 --out " + env_c) == 0);
  CHECK(slurp(fs::path(env_a) / "env.txt") !=
        slurp(fs::path(env_c) / "env.txt"));

  // Map renders identically across runs and thread counts.
  const std::string map1 = (tmp.path / "m1.pgm").string();
  const std::string map2 = (tmp.path / "m2.pgm").string();
  REQUIRE(run("map --scans " + env_a + " --res 0.1 --threads 1 --out " +
              map1) == 0);
  REQUIRE(run("map --scans " + env_a + " --res 0.1 --threads 4 --out " +
              map2) == 0);
  CHECK(slurp(map1) == slurp(map2));
  CHECK(slurp(map1 + ".txt") == slurp(map2 + ".txt"));
}

TEST_CASE("cli map produces a raster matching the data bbox") {
  TempDir tmp;
  const std::string env = (tmp.path / "env").string();
  REQUIRE(run("simulate --seed 3 --out " + env) == 0);
  const std::string pgm = (tmp.path / "map.pgm").string();
  REQUIRE(run("map --scans " + env + " --method grid --res 0.1 --out " +
              pgm) == 0);
  const std::string contents = slurp(pgm);
  CHECK(contents.substr(0, 3) == "P5\n");
  // The benchmark world spans roughly 8 x 6 m plus padding; at 0.1 m the
  // raster must be in the ballpark of 90 x 70 cells.
  std::istringstream header(contents.substr(3));
  std::size_t width = 0, height = 0;
  header >> width >> height;
  CHECK(width >= 80);
  CHECK(width <= 100);
  CHECK(height >= 60);
  CHECK(height <= 80);

  const std::string sidecar = slurp(pgm + ".txt");
  CHECK(sidecar.find("resolution=0.1") != std::string::npos);
}

TEST_CASE("cli roc writes the three-row report and csv") {
  TempDir tmp;
  const std::string env = (tmp.path / "env").string();
  REQUIRE(run("simulate --seed 5 --out " + env) == 0);
  const std::string report = (tmp.path / "report.txt").string();
  const std::string csv = (tmp.path / "roc").string();
  REQUIRE(run("roc --env " + env + " --method both --eval-res 0.2 --out " +
              report + " --csv " + csv) == 0);
  const std::string text = slurp(report);
  CHECK(text.find("Random guess") != std::string::npos);
  CHECK(text.find("Grid map") != std::string::npos);
  CHECK(text.find("Proposed method") != std::string::npos);
  CHECK(text.find("evaluation points:") != std::string::npos);

  const std::string field_csv = slurp(csv + "_field.csv");
  CHECK(field_csv.rfind("threshold,tpr,fpr\n", 0) == 0);
  CHECK(fs::exists(csv + "_grid.csv"));
}

TEST_CASE("cli config file supplies defaults, flags win") {
  TempDir tmp;
  const std::string env = (tmp.path / "env").string();
  REQUIRE(run("simulate --seed 2 --out " + env) == 0);

  const std::string config = (tmp.path / "occfield.cfg").string();
  {
    std::ofstream out(config);
    out << "res=0.4\n";
  }
  const std::string coarse = (tmp.path / "coarse.pgm").string();
  REQUIRE(run("map --config " + config + " --scans " + env + " --out " +
              coarse) == 0);
  const std::string fine = (tmp.path / "fine.pgm").string();
  REQUIRE(run("map --config " + config + " --scans " + env +
              " --res 0.1 --out " + fine) == 0);
  // The config resolution (0.4) gives a smaller raster than the flag (0.1).
  CHECK(slurp(coarse).size() < slurp(fine).size());
  CHECK(slurp(coarse + ".txt").find("resolution=0.4") != std::string::npos);
  CHECK(slurp(fine + ".txt").find("resolution=0.1") != std::string::npos);
}

}  // namespace
