#include <array>
#include <fstream>

#include "typerank/error.h"
#include "typerank/retrieval.h"

namespace typerank {

namespace {

constexpr std::array<char, 4> kMagic = {'T', 'R', 'I', 'X'};

class Writer {
 public:
  explicit Writer(std::ofstream& out) : out_(out) {}

  void u32(std::uint32_t v) {
    char bytes[4];
    for (int i = 0; i < 4; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    out_.write(bytes, 4);
  }
  void str(std::string_view s) {
    u32(static_cast<std::uint32_t>(s.size()));
    out_.write(s.data(), static_cast<std::streamsize>(s.size()));
  }

 private:
  std::ofstream& out_;
};

class Reader {
 public:
  Reader(std::ifstream& in, std::string source) : in_(in), source_(std::move(source)) {}

  std::uint32_t u32() {
    unsigned char bytes[4];
    read(reinterpret_cast<char*>(bytes), 4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes[i]) << (8 * i);
    return v;
  }
  std::string str() {
    std::string s(u32(), '\0');
    read(s.data(), s.size());
    return s;
  }
  void read(char* dst, std::size_t n) {
    in_.read(dst, static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) {
      throw DataError(source_ + ": truncated index file");
    }
  }

 private:
  std::ifstream& in_;
  std::string source_;
};

}  // namespace

void write_index(const EntityIndex& index, const std::filesystem::path& path,
                 std::string_view provenance) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  Writer w(out);
  out.write(kMagic.data(), kMagic.size());
  w.u32(kIndexFormatVersion);
  w.u32(index.include_names() ? 1u : 0u);
  w.str(provenance);
  w.u32(static_cast<std::uint32_t>(index.n_docs()));
  for (EntityIdx e = 0; e < index.n_docs(); ++e) {
    w.str(index.doc_id(e));
    w.u32(index.doc_length(e));
  }
  w.u32(static_cast<std::uint32_t>(index.vocabulary_size()));
  for (std::uint32_t t = 0; t < index.vocabulary_size(); ++t) {
    w.str(index.term(t));
    const auto& list = index.postings(t);
    w.u32(static_cast<std::uint32_t>(list.size()));
    for (const auto& p : list) {
      w.u32(p.doc);
      w.u32(p.tf);
    }
  }
  if (!out) throw DataError("failed writing " + path.string());
}

EntityIndex read_index(const std::filesystem::path& path, std::string* provenance) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  Reader r(in, path.string());
  std::array<char, 4> magic{};
  r.read(magic.data(), magic.size());
  if (magic != kMagic) throw DataError(path.string() + ": not an index file (bad magic)");
  auto version = r.u32();
  if (version != kIndexFormatVersion) {
    throw DataError(path.string() + ": unsupported index version " + std::to_string(version));
  }
  bool names = (r.u32() & 1u) != 0;
  auto prov = r.str();
  if (provenance) *provenance = prov;

  auto n_docs = r.u32();
  std::vector<std::string> ids;
  std::vector<std::uint32_t> lengths;
  ids.reserve(n_docs);
  lengths.reserve(n_docs);
  for (std::uint32_t i = 0; i < n_docs; ++i) {
    ids.push_back(r.str());
    lengths.push_back(r.u32());
  }
  auto n_terms = r.u32();
  std::vector<std::string> terms;
  std::vector<std::vector<Posting>> postings;
  terms.reserve(n_terms);
  postings.reserve(n_terms);
  for (std::uint32_t t = 0; t < n_terms; ++t) {
    terms.push_back(r.str());
    auto n = r.u32();
    std::vector<Posting> list(n);
    for (auto& p : list) {
      p.doc = r.u32();
      p.tf = r.u32();
    }
    postings.push_back(std::move(list));
  }
  return EntityIndex::from_parts(std::move(ids), std::move(lengths), std::move(terms),
                                 std::move(postings), names);
}

}  // namespace typerank
