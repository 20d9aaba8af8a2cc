// Copyright 2026 The cfmea Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CFMEA_SVG_HPP_
#define CFMEA_SVG_HPP_

#include <string>
#include <vector>

namespace cfmea {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct LineChart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
};

struct BarChart {
  std::string title;
  std::string y_label;
  std::vector<std::string> series_names;
  std::vector<std::string> group_labels;
  std::vector<std::vector<double>> values;  // values[group][series]
};

std::string render_line_chart(const LineChart& chart);
std::string render_bar_chart(const BarChart& chart);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace cfmea

#endif  // CFMEA_SVG_HPP_
