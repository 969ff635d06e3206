#include "maxham/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include <json.hpp>

namespace maxham {

static_assert(std::endian::native == std::endian::little,
              "snapshot writer assumes a little-endian host");

namespace {
constexpr char kMagic[8] = {'M', 'A', 'X', 'H', 'A', 'M', 'S', '1'};

void put_array(std::ofstream& out, const Field& f) {
  out.write(reinterpret_cast<const char*>(f.data().data()),
            static_cast<std::streamsize>(f.data().size() * sizeof(double)));
}

void get_array(std::ifstream& in, Field& f) {
  in.read(reinterpret_cast<char*>(f.data().data()),
          static_cast<std::streamsize>(f.data().size() * sizeof(double)));
}
}  // namespace

void write_snapshot(const FieldState& s, const std::string& prefix) {
  std::ofstream out(prefix + ".bin", std::ios::binary);
  if (!out) throw std::runtime_error("cannot open snapshot file " + prefix + ".bin");
  out.write(kMagic, 8);
  for (int a = 0; a < 3; ++a) {
    const std::int32_t n = s.grid.n[a];
    out.write(reinterpret_cast<const char*>(&n), 4);
  }
  for (int a = 0; a < 3; ++a)
    out.write(reinterpret_cast<const char*>(&s.grid.dx[a]), 8);
  out.write(reinterpret_cast<const char*>(&s.time), 8);
  put_array(out, s.A0);
  for (int a = 0; a < 3; ++a) put_array(out, s.A[a]);
  put_array(out, s.p0);
  for (int a = 0; a < 3; ++a) put_array(out, s.p[a]);
  if (!out) throw std::runtime_error("snapshot write failed: " + prefix + ".bin");

  nlohmann::json meta;
  meta["format"] = "MAXHAMS1";
  meta["grid"] = {{"n", s.grid.n}, {"dx", s.grid.dx}};
  meta["time"] = s.time;
  meta["arrays"] = {"A0", "A1", "A2", "A3", "p0", "p1", "p2", "p3"};
  meta["dtype"] = "float64-le";
  meta["order"] = "C";
  meta["header_bytes"] = 8 + 12 + 24 + 8;
  std::ofstream side(prefix + ".json");
  side << meta.dump(2) << "\n";
}

FieldState read_snapshot(const std::string& prefix) {
  std::ifstream in(prefix + ".bin", std::ios::binary);
  if (!in) throw std::runtime_error("cannot open snapshot file " + prefix + ".bin");
  char magic[8];
  in.read(magic, 8);
  if (std::memcmp(magic, kMagic, 8) != 0)
    throw std::runtime_error("bad snapshot magic in " + prefix + ".bin");
  GridSpec g;
  for (int a = 0; a < 3; ++a) {
    std::int32_t n = 0;
    in.read(reinterpret_cast<char*>(&n), 4);
    g.n[a] = n;
  }
  for (int a = 0; a < 3; ++a) in.read(reinterpret_cast<char*>(&g.dx[a]), 8);
  g.validate();
  FieldState s = FieldState::zero(g);
  in.read(reinterpret_cast<char*>(&s.time), 8);
  get_array(in, s.A0);
  for (int a = 0; a < 3; ++a) get_array(in, s.A[a]);
  get_array(in, s.p0);
  for (int a = 0; a < 3; ++a) get_array(in, s.p[a]);
  if (!in) throw std::runtime_error("snapshot truncated: " + prefix + ".bin");
  return s;
}

}  // namespace maxham
