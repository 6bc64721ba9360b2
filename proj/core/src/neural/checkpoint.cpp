#include "spinlearn/neural/checkpoint.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

#include "spinlearn/errors.hpp"

namespace spinlearn::neural {
namespace {

constexpr std::array<char, 8> kMagic{'S', 'P', 'L', 'C', 'K', 'P', 'T', '1'};

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
}

std::uint64_t get_u64(const char* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(p[i])) << (8 * i);
  return v;
}

template <typename S>
void put_values(std::string& out, const Vector<S>& values) {
  for (Eigen::Index i = 0; i < values.size(); ++i) put_u64(out, std::bit_cast<std::uint64_t>(static_cast<double>(values[i])));
}

Vector<float> get_values(const char*& p, Eigen::Index n) {
  Vector<float> v(n);
  for (Eigen::Index i = 0; i < n; ++i, p += 8) v[i] = static_cast<float>(std::bit_cast<double>(get_u64(p)));
  return v;
}

nlohmann::json tensor_table(const std::vector<TensorSpec>& specs) {
  auto table = nlohmann::json::array();
  for (const auto& s : specs) table.push_back({{"name", s.name}, {"rows", s.rows}, {"cols", s.cols}});
  return table;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const Surrogate& model, const CheckpointInfo& info) {
  const auto& params = model.params();
  const bool with_adam = info.state.adam.m.size() == params.size() && params.size() > 0;
  nlohmann::json header{{"format", "spinlearn-checkpoint"},
                        {"version", 1},
                        {"shape", model.shape()},
                        {"input_layout", model.input_layout()},
                        {"tensors", tensor_table(params.specs())},
                        {"seed", info.seed},
                        {"train_config", info.train_config},
                        {"dataset_fingerprint", info.dataset_fingerprint},
                        {"epochs_done", info.state.epoch},
                        {"adam_step", info.state.adam.step},
                        {"adam_moments", with_adam},
                        {"history", {{"train", info.state.history.train}, {"validation", info.state.history.validation}}},
                        {"metadata", info.metadata}};
  const std::string text = header.dump();
  std::string blob(kMagic.begin(), kMagic.end());
  put_u64(blob, text.size());
  blob += text;
  put_values(blob, params.values());
  if (with_adam) {
    put_values(blob, info.state.adam.m);
    put_values(blob, info.state.adam.v);
  }
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(blob.data(), static_cast<std::streamsize>(blob.size()));
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint " + path.string());
  const std::string blob((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto corrupt = [&](const std::string& why) { return CorruptionError(path.string() + ": " + why); };
  if (blob.size() < 16 || std::memcmp(blob.data(), kMagic.data(), kMagic.size()) != 0) throw corrupt("not a checkpoint");
  const std::uint64_t header_len = get_u64(blob.data() + 8);
  if (header_len > blob.size() - 16) throw corrupt("truncated header");

  nlohmann::json header;
  try {
    header = nlohmann::json::parse(blob.begin() + 16, blob.begin() + 16 + static_cast<std::ptrdiff_t>(header_len));
  } catch (const nlohmann::json::exception& e) {
    throw corrupt(std::string("unreadable header: ") + e.what());
  }

  try {
    if (header.at("format") != "spinlearn-checkpoint" || header.at("version") != 1) throw corrupt("unsupported format");
    const auto shape = header.at("shape").get<SurrogateShape>();
    Surrogate model(shape, std::uint64_t{0});
    if (header.at("tensors") != tensor_table(model.params().specs())) throw corrupt("tensor table mismatch");

    const bool with_adam = header.at("adam_moments").get<bool>();
    const Eigen::Index n = model.params().size();
    const std::size_t expect = static_cast<std::size_t>(n) * 8 * (with_adam ? 3 : 1);
    const std::size_t payload = blob.size() - 16 - header_len;
    if (payload != expect) {
      throw corrupt("payload has " + std::to_string(payload) + " bytes, expected " + std::to_string(expect));
    }
    const char* p = blob.data() + 16 + header_len;
    model.params().values() = get_values(p, n);

    CheckpointInfo info;
    info.seed = header.at("seed").get<std::uint64_t>();
    info.train_config = header.at("train_config").get<TrainConfig>();
    info.dataset_fingerprint = header.at("dataset_fingerprint").get<std::string>();
    info.state.epoch = header.at("epochs_done").get<std::size_t>();
    info.state.history.train = header.at("history").at("train").get<std::vector<double>>();
    info.state.history.validation = header.at("history").at("validation").get<std::vector<double>>();
    info.metadata = header.at("metadata");
    if (with_adam) {
      info.state.adam.m = get_values(p, n);
      info.state.adam.v = get_values(p, n);
      info.state.adam.step = header.at("adam_step").get<std::uint64_t>();
    }
    return Checkpoint{std::move(model), std::move(info)};
  } catch (const nlohmann::json::exception& e) {
    throw corrupt(std::string("malformed header: ") + e.what());
  } catch (const ConfigError& e) {
    throw corrupt(std::string("invalid shape: ") + e.what());
  }
}

}  // namespace spinlearn::neural
