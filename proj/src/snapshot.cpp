#include "nsf/snapshot.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

namespace nsf {

namespace {

template <class T>
void put(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw std::runtime_error("snapshot truncated");
  return v;
}

}  // namespace

void write_snapshot(const std::filesystem::path& path,
                    const std::vector<const ScalarField*>& fields) {
  if (fields.empty()) throw std::invalid_argument("snapshot needs at least one field");
  const Grid& g = fields.front()->grid();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open snapshot " + path.string());
  out.write("NSFF", 4);
  put<std::uint32_t>(out, snapshot_version);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(g.dim()));
  for (int a = 0; a < g.dim(); ++a) put<std::uint32_t>(out, static_cast<std::uint32_t>(g.nodes(a)));
  for (int a = 0; a < g.dim(); ++a) put<double>(out, g.extent(a));
  for (const ScalarField* f : fields) {
    if (f->grid() != g) throw std::invalid_argument("snapshot fields live on different grids");
    const auto v = f->values();
    out.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(v.size() * sizeof(double)));
  }
  if (!out) throw std::runtime_error("failed writing snapshot " + path.string());
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open snapshot " + path.string());
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "NSFF", 4) != 0) throw std::runtime_error("bad snapshot magic");
  const auto version = get<std::uint32_t>(in);
  if (version != snapshot_version) throw std::runtime_error("unsupported snapshot version");
  Snapshot s;
  s.dim = static_cast<int>(get<std::uint32_t>(in));
  if (s.dim < 1 || s.dim > 2) throw std::runtime_error("bad snapshot dimension");
  for (int a = 0; a < s.dim; ++a) s.nodes[a] = get<std::uint32_t>(in);
  for (int a = 0; a < s.dim; ++a) s.extents[a] = get<double>(in);
  const std::size_t count = static_cast<std::size_t>(s.nodes[0]) * s.nodes[1];
  std::vector<double> buf(count);
  while (in.peek() != std::ifstream::traits_type::eof()) {
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(count * sizeof(double)));
    if (!in) throw std::runtime_error("snapshot payload truncated");
    s.fields.push_back(buf);
  }
  return s;
}

}  // namespace nsf
