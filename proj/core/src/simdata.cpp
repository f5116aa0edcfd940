#include "activelab/simdata.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <unordered_set>

#include "activelab/error.hpp"
#include "activelab/format.hpp"
#include "activelab/seed.hpp"

namespace activelab {

ClassPopulations ClassPopulations::flash() {
  return {{123, 353, 43,  250, 115, 22,  345, 507,  20,  2404, 207, 331,
           753, 380, 252, 3059, 1000, 557, 6882, 927, 39,  1771, 1199, 276,
           39,  2254, 411, 79,  556,  4211, 30,  594, 170, 552}};
}

std::size_t ClassPopulations::total() const noexcept {
  return std::accumulate(counts.begin(), counts.end(), std::size_t{0});
}

void ClassPopulations::validate() const {
  if (counts.empty()) throw ConfigError("populations must list at least one class");
  for (std::size_t c = 0; c < counts.size(); ++c)
    if (counts[c] == 0) throw ConfigError("population of class " + std::to_string(c) + " is zero");
}

ClassPopulations parse_populations(std::string_view text) {
  if (text == "flash") return ClassPopulations::flash();
  ClassPopulations pop;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    std::string_view item = text.substr(start, comma - start);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    std::size_t value = 0;
    const auto res = std::from_chars(item.data(), item.data() + item.size(), value);
    if (item.empty() || res.ec != std::errc{} || res.ptr != item.data() + item.size())
      throw ConfigError("invalid populations '" + std::string(text) +
                        "' (expected 'flash' or comma-separated counts)");
    pop.counts.push_back(value);
    start = comma + 1;
  }
  pop.validate();
  return pop;
}

void GenConfig::validate() const {
  populations.validate();
  if (dim < 2) throw ConfigError("dim must be at least 2");
  if (!(separation > 0.0) || !std::isfinite(separation))
    throw ConfigError("separation must be positive");
  if (!(spread > 0.0) || !std::isfinite(spread)) throw ConfigError("spread must be positive");
}

Dataset generate_synthetic(const GenConfig& config) {
  config.validate();
  const std::size_t k = config.populations.num_classes();
  const std::size_t d = config.dim;

  std::vector<std::vector<double>> means(k, std::vector<double>(d));
  {
    std::mt19937_64 rng(derive_seed(config.seed, Stream::ClassMeans));
    std::normal_distribution<double> normal(0.0, 1.0);
    for (auto& mean : means) {
      double norm = 0.0;
      do {
        norm = 0.0;
        for (double& v : mean) {
          v = normal(rng);
          norm += v * v;
        }
      } while (norm == 0.0);
      const double scale = config.separation / std::sqrt(norm);
      for (double& v : mean) v *= scale;
    }
  }

  std::vector<Example> examples;
  examples.reserve(config.populations.total());
  for (std::size_t c = 0; c < k; ++c) {
    std::mt19937_64 rng(derive_seed(config.seed, Stream::ClassSamples, c));
    std::normal_distribution<double> noise(0.0, config.spread);
    for (std::size_t i = 0; i < config.populations.counts[c]; ++i) {
      Example e;
      e.true_label = static_cast<ClassId>(c);
      e.features.resize(d);
      for (std::size_t j = 0; j < d; ++j) e.features[j] = means[c][j] + noise(rng);
      examples.push_back(std::move(e));
    }
  }

  std::mt19937_64 order_rng(derive_seed(config.seed, Stream::Shuffle));
  std::shuffle(examples.begin(), examples.end(), order_rng);
  for (std::size_t i = 0; i < examples.size(); ++i) examples[i].id = static_cast<SampleId>(i);
  return Dataset(k, d, std::move(examples));
}

Partition partition(const Dataset& dataset, std::size_t per_class_test, std::uint64_t seed) {
  const std::size_t k = dataset.num_classes();
  std::vector<std::vector<SampleId>> members(k);
  for (const auto& e : dataset.examples()) members[e.true_label].push_back(e.id);
  for (std::size_t c = 0; c < k; ++c)
    if (members[c].size() < per_class_test) throw ClassTooSmall(c, members[c].size(), per_class_test);

  std::vector<char> in_test(dataset.size(), 0);
  std::mt19937_64 rng(derive_seed(seed, Stream::Partition));
  for (auto& ids : members) {
    // Partial Fisher-Yates: the first per_class_test slots become the test draw.
    for (std::size_t i = 0; i < per_class_test; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, ids.size() - 1);
      std::swap(ids[i], ids[pick(rng)]);
      in_test[ids[i]] = 1;
    }
  }

  std::vector<Example> train;
  std::vector<Example> test;
  Partition out;
  for (const auto& e : dataset.examples()) {
    auto& side = in_test[e.id] ? test : train;
    auto& origin = in_test[e.id] ? out.test_origin : out.train_origin;
    origin.push_back(e.id);
    Example copy = e;
    copy.id = static_cast<SampleId>(side.size());
    side.push_back(std::move(copy));
  }
  if (train.empty()) throw ClassTooSmall(0, 0, per_class_test);
  out.train = Dataset(k, dataset.dim(), std::move(train));
  if (!test.empty()) out.test = Dataset(k, dataset.dim(), std::move(test));
  return out;
}

void write_dataset_csv(const Dataset& dataset, std::ostream& out) {
  out << "id,label";
  for (std::size_t j = 0; j < dataset.dim(); ++j) out << ",f" << j;
  out << '\n';
  std::string line;
  for (const auto& e : dataset.examples()) {
    line.clear();
    line += std::to_string(e.id);
    line += ',';
    line += std::to_string(e.true_label);
    for (double v : e.features) {
      line += ',';
      line += format_double(v);
    }
    line += '\n';
    out << line;
  }
}

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

template <typename T>
bool parse_uint(std::string_view text, T& value) {
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  return !text.empty() && res.ec == std::errc{} && res.ptr == text.data() + text.size();
}

}  // namespace

Dataset read_dataset_csv(std::istream& in, std::optional<std::size_t> num_classes) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw FormatError(1, "missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_commas(line);
  if (header.size() < 3 || header[0] != "id" || header[1] != "label")
    throw FormatError(1, "header must start with id,label,f0");
  const std::size_t dim = header.size() - 2;
  for (std::size_t j = 0; j < dim; ++j)
    if (header[j + 2] != "f" + std::to_string(j))
      throw FormatError(1, "expected column f" + std::to_string(j));

  std::vector<Example> examples;
  std::unordered_set<std::uint64_t> seen_ids;
  std::size_t max_label = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_commas(line);
    if (cells.size() != dim + 2)
      throw FormatError(line_no, "expected " + std::to_string(dim + 2) + " fields, found " +
                                     std::to_string(cells.size()));
    std::uint64_t id = 0;
    ClassId label = 0;
    if (!parse_uint(cells[0], id)) throw FormatError(line_no, "invalid id");
    if (!seen_ids.insert(id).second) throw FormatError(line_no, "duplicate id " + std::to_string(id));
    if (!parse_uint(cells[1], label)) throw FormatError(line_no, "invalid label");
    if (num_classes && label >= *num_classes)
      throw FormatError(line_no, "label " + std::to_string(label) + " >= class count " +
                                     std::to_string(*num_classes));
    Example e;
    e.id = static_cast<SampleId>(examples.size());
    e.true_label = label;
    e.features.resize(dim);
    for (std::size_t j = 0; j < dim; ++j) {
      if (!parse_double(cells[j + 2], e.features[j]) || !std::isfinite(e.features[j]))
        throw FormatError(line_no, "invalid feature f" + std::to_string(j));
    }
    max_label = std::max<std::size_t>(max_label, label);
    examples.push_back(std::move(e));
  }
  if (examples.empty()) throw FormatError(line_no, "dataset has no examples");
  return Dataset(num_classes.value_or(max_label + 1), dim, std::move(examples));
}

void save_dataset(const Dataset& dataset, const std::filesystem::path& path) {
  std::ostringstream out;
  write_dataset_csv(dataset, out);
  write_file_atomic(path, out.str());
}

Dataset load_dataset(const std::filesystem::path& path, std::optional<std::size_t> num_classes) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open dataset " + path.string());
  return read_dataset_csv(in, num_classes);
}

}  // namespace activelab
