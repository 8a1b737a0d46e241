// SPDX-License-Identifier: MIT

#include "plab/checkpoint.hpp"

#include <cstdint>
#include <fstream>

namespace plab {

namespace {
constexpr char kMagic[] = "PLABCKPT1\n";
constexpr std::size_t kMagicLen = sizeof(kMagic) - 1;
}  // namespace

void Checkpoint::add_array(const std::string& name, std::vector<double> values) {
  arrays_[name] = std::move(values);
}

void Checkpoint::add_complex(const std::string& name, const std::vector<cdouble>& values) {
  std::vector<double> flat;
  flat.reserve(2 * values.size());
  for (const auto& z : values) {
    flat.push_back(z.real());
    flat.push_back(z.imag());
  }
  add_array(name, std::move(flat));
}

const std::vector<double>& Checkpoint::array(const std::string& name) const {
  auto it = arrays_.find(name);
  PLAB_CHECK(it != arrays_.end(), errc::bad_config, "checkpoint has no array named " + name);
  return it->second;
}

std::vector<cdouble> Checkpoint::complex_array(const std::string& name) const {
  const auto& flat = array(name);
  PLAB_CHECK(flat.size() % 2 == 0, errc::bad_config,
             "array " + name + " has odd length, cannot be complex");
  std::vector<cdouble> out(flat.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = {flat[2 * i], flat[2 * i + 1]};
  return out;
}

std::vector<std::string> Checkpoint::array_names() const {
  std::vector<std::string> names;
  names.reserve(arrays_.size());
  for (const auto& [k, v] : arrays_) names.push_back(k);
  return names;
}

void Checkpoint::save(const std::string& path) const {
  nlohmann::json header;
  header["meta"] = meta;
  auto& list = header["arrays"] = nlohmann::json::array();
  for (const auto& [name, values] : arrays_)
    list.push_back({{"name", name}, {"count", values.size()}});
  const std::string hs = header.dump();

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  PLAB_CHECK(out.good(), errc::bad_config, "cannot open checkpoint file for writing: " + path);
  out.write(kMagic, static_cast<std::streamsize>(kMagicLen));
  const std::uint64_t hlen = hs.size();
  out.write(reinterpret_cast<const char*>(&hlen), sizeof(hlen));
  out.write(hs.data(), static_cast<std::streamsize>(hs.size()));
  for (const auto& [name, values] : arrays_)
    out.write(reinterpret_cast<const char*>(values.data()),
              static_cast<std::streamsize>(values.size() * sizeof(double)));
  out.flush();
  PLAB_CHECK(out.good(), errc::bad_config, "failed writing checkpoint file: " + path);
}

Checkpoint Checkpoint::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  PLAB_CHECK(in.good(), errc::bad_config, "cannot open checkpoint file: " + path);

  char magic[kMagicLen];
  in.read(magic, static_cast<std::streamsize>(kMagicLen));
  PLAB_CHECK(in.good() && std::string(magic, kMagicLen) == kMagic, errc::bad_config,
             "not a checkpoint file: " + path);

  std::uint64_t hlen = 0;
  in.read(reinterpret_cast<char*>(&hlen), sizeof(hlen));
  PLAB_CHECK(in.good() && hlen < (1ull << 30), errc::bad_config,
             "corrupt checkpoint header: " + path);
  std::string hs(hlen, '\0');
  in.read(hs.data(), static_cast<std::streamsize>(hlen));
  PLAB_CHECK(in.good(), errc::bad_config, "truncated checkpoint header: " + path);

  nlohmann::json header = nlohmann::json::parse(hs);
  Checkpoint ck;
  ck.meta = header.value("meta", nlohmann::json::object());
  for (const auto& entry : header.at("arrays")) {
    const std::string name = entry.at("name").get<std::string>();
    const std::size_t count = entry.at("count").get<std::size_t>();
    std::vector<double> values(count);
    in.read(reinterpret_cast<char*>(values.data()),
            static_cast<std::streamsize>(count * sizeof(double)));
    PLAB_CHECK(in.good(), errc::bad_config, "truncated checkpoint array " + name);
    ck.arrays_[name] = std::move(values);
  }
  return ck;
}

}  // namespace plab
