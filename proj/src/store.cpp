#include "ordertypes/store.hpp"

#include <zlib.h>

#include <algorithm>
#include <fstream>
#include <iterator>

namespace ordertypes {

OrderTypeStore OrderTypeStore::base() {
  OrderTypeStore store;
  const PointSet triangle{{0, 0}, {1, 0}, {0, 1}};
  for (int n = 0; n <= 3; ++n) {
    PointSet w(triangle.begin(), triangle.begin() + n);
    store.append_level({{canonical_code(Chirotope::of(w)), w}});
  }
  return store;
}

const std::vector<OrderTypeRecord>& OrderTypeStore::records(int n) const {
  if (!has_size(n)) throw MissingSize(n);
  return levels_[n];
}

std::optional<std::size_t> OrderTypeStore::find(const CanonicalCode& code) const {
  if (!has_size(code.size)) return std::nullopt;
  const auto& idx = index_[code.size];
  auto it = idx.find(code);
  if (it == idx.end()) return std::nullopt;
  return it->second;
}

std::size_t OrderTypeStore::index_of(const CanonicalCode& code) const {
  if (!has_size(code.size)) throw MissingSize(code.size);
  auto i = find(code);
  if (!i) throw UnknownCode("unknown order type code " + code.hex());
  return *i;
}

const OrderTypeRecord& OrderTypeStore::record(const CanonicalCode& code) const {
  return levels_[code.size][index_of(code)];
}

void OrderTypeStore::append_level(std::vector<OrderTypeRecord> records) {
  const int n = max_size() + 1;
  std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) { return a.code < b.code; });
  std::unordered_map<CanonicalCode, std::size_t, CodeHash> idx;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].code.size != n) throw std::invalid_argument("record size does not match the level");
    if (!idx.emplace(records[i].code, i).second) throw std::invalid_argument("duplicate code in level");
  }
  levels_.push_back(std::move(records));
  index_.push_back(std::move(idx));
}

void OrderTypeStore::truncate(int n) {
  if (n < max_size()) {
    levels_.resize(static_cast<std::size_t>(n + 1));
    index_.resize(static_cast<std::size_t>(n + 1));
  }
}

bool operator==(const OrderTypeStore& a, const OrderTypeStore& b) {
  if (a.levels_.size() != b.levels_.size()) return false;
  for (std::size_t n = 0; n < a.levels_.size(); ++n) {
    const auto& x = a.levels_[n];
    const auto& y = b.levels_[n];
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i].code != y[i].code || x[i].witness != y[i].witness) return false;
    }
  }
  return true;
}

namespace {

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_string(std::string& out, const std::string& s) {
  put_u32(out, static_cast<std::uint32_t>(s.size()));
  out += s;
}

class Reader {
 public:
  explicit Reader(std::string_view data) : data_(data) {}

  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
    pos_ += 4;
    return v;
  }

  std::string_view bytes(std::size_t n) {
    need(n);
    auto s = data_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  bool done() const { return pos_ == data_.size(); }

 private:
  void need(std::size_t n) const {
    if (data_.size() - pos_ < n) throw StoreFormatError(StoreFormatError::Kind::Corrupt, "store file ends early");
  }

  std::string_view data_;
  std::size_t pos_ = 0;
};

std::uint32_t crc_of(std::string_view data) {
  uLong crc = crc32(0L, Z_NULL, 0);
  crc = crc32(crc, reinterpret_cast<const Bytef*>(data.data()), static_cast<uInt>(data.size()));
  return static_cast<std::uint32_t>(crc);
}

}  // namespace

void store_save(const OrderTypeStore& store, const std::filesystem::path& path) {
  std::string out(OrderTypeStore::kVersion);
  out.push_back('\n');
  put_u32(out, static_cast<std::uint32_t>(store.max_size() + 1));
  for (int n = 0; n <= store.max_size(); ++n) {
    const auto& recs = store.records(n);
    put_u32(out, static_cast<std::uint32_t>(recs.size()));
    for (const auto& r : recs) {
      put_u32(out, static_cast<std::uint32_t>(r.code.bytes.size()));
      out.append(r.code.bytes.begin(), r.code.bytes.end());
      put_u32(out, static_cast<std::uint32_t>(r.witness.size()));
      for (const auto& p : r.witness) {
        put_string(out, to_string(p.x));
        put_string(out, to_string(p.y));
      }
    }
  }
  put_u32(out, crc_of(out));

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw StoreFormatError(StoreFormatError::Kind::Io, "cannot open " + path.string() + " for writing");
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) throw StoreFormatError(StoreFormatError::Kind::Io, "write failed for " + path.string());
}

OrderTypeStore store_load(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw StoreFormatError(StoreFormatError::Kind::Io, "cannot open " + path.string());
  std::string data((std::istreambuf_iterator<char>(file)), std::istreambuf_iterator<char>());

  const std::string header = std::string(OrderTypeStore::kVersion) + "\n";
  if (data.compare(0, 5, "OTDB ") != 0) {
    throw StoreFormatError(StoreFormatError::Kind::Version, "not an order type store: " + path.string());
  }
  if (data.compare(0, header.size(), header) != 0) {
    const auto eol = data.find('\n');
    throw StoreFormatError(StoreFormatError::Kind::Version,
                           "unsupported store version '" + data.substr(0, std::min<std::size_t>(eol, 16)) + "'");
  }
  if (data.size() < header.size() + 8) throw StoreFormatError(StoreFormatError::Kind::Checksum, "store file truncated");
  const std::string_view body(data.data(), data.size() - 4);
  Reader tail(std::string_view(data).substr(data.size() - 4));
  if (tail.u32() != crc_of(body)) {
    throw StoreFormatError(StoreFormatError::Kind::Checksum, "checksum mismatch in " + path.string());
  }

  Reader in(body.substr(header.size()));
  OrderTypeStore store;
  const auto levels = in.u32();
  for (std::uint32_t n = 0; n < levels; ++n) {
    std::vector<OrderTypeRecord> recs(in.u32());
    for (auto& r : recs) {
      r.code.size = static_cast<int>(n);
      auto bytes = in.bytes(in.u32());
      r.code.bytes.assign(bytes.begin(), bytes.end());
      const auto points = in.u32();
      for (std::uint32_t i = 0; i < points; ++i) {
        auto x = parse_rational(in.bytes(in.u32()));
        auto y = parse_rational(in.bytes(in.u32()));
        r.witness.emplace_back(std::move(x), std::move(y));
      }
    }
    store.append_level(std::move(recs));
  }
  if (!in.done()) throw StoreFormatError(StoreFormatError::Kind::Corrupt, "trailing bytes in store file");
  return store;
}

}  // namespace ordertypes
