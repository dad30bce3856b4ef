/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The pawsim Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "pawsim/commands.hpp"
#include "pawsim/config.hpp"
#include "pawsim/error.hpp"

int main(int argc, char** argv) {
  CLI::App app{"pawsim: photoacoustic wave simulation and Fourier neural operator surrogate"};
  std::string command;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out = "out";
  app.add_option("command", command, "Subcommand")->required()->check(CLI::IsMember(pawsim::command_names()));
  app.add_option("--config", config_path, "JSON configuration file")->required()->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "Override the configured seed");
  app.add_option("--out", out, "Output directory");
  CLI11_PARSE(app, argc, argv);

  try {
    pawsim::RunConfig config = pawsim::load_config(config_path);
    if (seed) config.set_seed(*seed);
    const auto report = pawsim::run_command(command, config, out, &std::cerr);
    std::cout << report["metrics"].dump(2) << '\n';
  } catch (const pawsim::Error& e) {
    std::cerr << "pawsim " << command << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "pawsim " << command << ": " << e.what() << '\n';
    return 1;
  }
  return 0;
}
