#include "sentorder/embedding_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "sentorder/error.hpp"

namespace sentorder {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

struct Header {
  std::size_t dim = 0;
  std::string encoder_tag;
};

bool is_blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

void check_vector(const Vector& v, std::size_t dim, const std::string& what) {
  if (v.size() != dim) {
    throw Error(what + ": vector has dimension " + std::to_string(v.size()) + ", expected " +
                std::to_string(dim));
  }
  bool nonzero = false;
  for (double x : v) {
    if (!std::isfinite(x)) throw Error(what + ": non-finite vector component");
    nonzero = nonzero || x != 0.0;
  }
  if (!nonzero) throw Error(what + ": all-zero vector");
}

std::string where(const std::string& story, std::size_t sentence) {
  return "story " + story + " sentence " + std::to_string(sentence);
}

// Line-oriented JSONL driver: parses the header, then hands every record to
// `on_record(json, location)`.
template <typename OnRecord>
Header read_jsonl(std::istream& in, const std::string& source, OnRecord&& on_record) {
  std::optional<Header> header;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (is_blank(line)) continue;
    const std::string loc = source + ":" + std::to_string(lineno);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(loc + ": invalid JSON: " + e.what());
    }
    try {
      if (!header) {
        if (!j.is_object() || !j.value("header", false)) {
          throw Error("first record must be the header {\"header\":true,\"dim\":D,...}");
        }
        Header h;
        h.dim = j.at("dim").get<std::size_t>();
        h.encoder_tag = j.value("encoder_tag", std::string{});
        if (h.dim == 0) throw Error("header dim must be positive");
        header = h;
        continue;
      }
      on_record(j, *header);
    } catch (const json::exception& e) {
      throw Error(loc + ": " + e.what());
    } catch (const Error& e) {
      throw Error(loc + ": " + e.what());
    }
  }
  if (!header) throw Error(source + ": missing header line");
  return *header;
}

// Moves index-keyed parts into a dense vector, rejecting gaps.
template <typename T>
std::vector<T> densify(std::map<std::size_t, T>&& parts, const std::string& story,
                       const std::string& source) {
  std::vector<T> out;
  out.reserve(parts.size());
  std::size_t expect = 0;
  for (auto& [idx, value] : parts) {
    if (idx != expect) {
      throw Error(source + ": story " + story + " is missing sentence index " +
                  std::to_string(expect));
    }
    out.push_back(std::move(value));
    ++expect;
  }
  return out;
}

ordered_json header_json(std::size_t dim, const std::string& tag) {
  ordered_json h;
  h["header"] = true;
  h["dim"] = dim;
  h["encoder_tag"] = tag;
  return h;
}

template <typename Map>
void check_uniform(const Map& data, std::size_t& dim, std::string& tag) {
  bool first = true;
  for (const auto& [id, value] : data) {
    validate(value);
    if (id != value.story_id) throw Error("map key " + id + " differs from story_id");
    if (first) {
      dim = value.dim;
      tag = value.encoder_tag;
      first = false;
    } else if (value.dim != dim || value.encoder_tag != tag) {
      throw Error("all stories in one file must share dim and encoder_tag");
    }
  }
}

}  // namespace

void validate(const SentenceVectors& vecs) {
  if (vecs.dim == 0) throw Error("story " + vecs.story_id + ": dim must be positive");
  if (vecs.vectors.empty()) throw Error("story " + vecs.story_id + ": no sentence vectors");
  for (std::size_t i = 0; i < vecs.vectors.size(); ++i) {
    check_vector(vecs.vectors[i], vecs.dim, where(vecs.story_id, i));
  }
}

void validate(const TokenVectors& toks) {
  if (toks.dim == 0) throw Error("story " + toks.story_id + ": dim must be positive");
  if (toks.sentences.empty()) throw Error("story " + toks.story_id + ": no sentences");
  for (std::size_t i = 0; i < toks.sentences.size(); ++i) {
    if (toks.sentences[i].empty()) throw Error(where(toks.story_id, i) + ": empty token list");
    for (const Token& t : toks.sentences[i]) {
      check_vector(t.vector, toks.dim, where(toks.story_id, i) + " token '" + t.text + "'");
    }
  }
}

SentenceVectorMap read_sentence_vectors(std::istream& in, const std::string& source) {
  std::map<std::string, std::map<std::size_t, Vector>> pending;
  const Header header = read_jsonl(in, source, [&](const json& j, const Header& h) {
    auto id = j.at("story_id").get<std::string>();
    auto idx = j.at("sentence_index").get<std::size_t>();
    auto vec = j.at("vector").get<Vector>();
    check_vector(vec, h.dim, where(id, idx));
    if (!pending[id].emplace(idx, std::move(vec)).second) {
      throw Error("duplicate record for " + where(id, idx));
    }
  });

  SentenceVectorMap out;
  for (auto& [id, parts] : pending) {
    SentenceVectors sv;
    sv.story_id = id;
    sv.dim = header.dim;
    sv.encoder_tag = header.encoder_tag;
    sv.vectors = densify(std::move(parts), id, source);
    out.emplace(id, std::move(sv));
  }
  return out;
}

SentenceVectorMap read_sentence_vectors(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open embeddings file " + path.string());
  return read_sentence_vectors(in, path.string());
}

TokenVectorMap read_token_vectors(std::istream& in, const std::string& source) {
  std::map<std::string, std::map<std::size_t, std::vector<Token>>> pending;
  const Header header = read_jsonl(in, source, [&](const json& j, const Header& h) {
    auto id = j.at("story_id").get<std::string>();
    auto idx = j.at("sentence_index").get<std::size_t>();
    const json& arr = j.at("tokens");
    if (!arr.is_array()) throw Error("tokens must be an array");
    if (arr.empty()) throw Error(where(id, idx) + ": empty token list");
    std::vector<Token> tokens;
    tokens.reserve(arr.size());
    for (const json& t : arr) {
      Token tok{t.at("t").get<std::string>(), t.at("v").get<Vector>()};
      check_vector(tok.vector, h.dim, where(id, idx) + " token '" + tok.text + "'");
      tokens.push_back(std::move(tok));
    }
    if (!pending[id].emplace(idx, std::move(tokens)).second) {
      throw Error("duplicate record for " + where(id, idx));
    }
  });

  TokenVectorMap out;
  for (auto& [id, parts] : pending) {
    TokenVectors tv;
    tv.story_id = id;
    tv.dim = header.dim;
    tv.encoder_tag = header.encoder_tag;
    tv.sentences = densify(std::move(parts), id, source);
    out.emplace(id, std::move(tv));
  }
  return out;
}

TokenVectorMap read_token_vectors(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open embeddings file " + path.string());
  return read_token_vectors(in, path.string());
}

void write_sentence_vectors(std::ostream& out, const SentenceVectorMap& data) {
  std::size_t dim = 0;
  std::string tag;
  check_uniform(data, dim, tag);
  if (data.empty()) throw Error("refusing to write an embeddings file with no stories");
  out << header_json(dim, tag).dump() << '\n';
  for (const auto& [id, sv] : data) {
    for (std::size_t i = 0; i < sv.vectors.size(); ++i) {
      ordered_json r;
      r["story_id"] = id;
      r["sentence_index"] = i;
      r["vector"] = sv.vectors[i];
      out << r.dump() << '\n';
    }
  }
}

void write_sentence_vectors(const std::filesystem::path& path, const SentenceVectorMap& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  write_sentence_vectors(out, data);
}

void write_token_vectors(std::ostream& out, const TokenVectorMap& data) {
  std::size_t dim = 0;
  std::string tag;
  check_uniform(data, dim, tag);
  if (data.empty()) throw Error("refusing to write an embeddings file with no stories");
  out << header_json(dim, tag).dump() << '\n';
  for (const auto& [id, tv] : data) {
    for (std::size_t i = 0; i < tv.sentences.size(); ++i) {
      ordered_json r;
      r["story_id"] = id;
      r["sentence_index"] = i;
      ordered_json tokens = ordered_json::array();
      for (const Token& t : tv.sentences[i]) {
        ordered_json tj;
        tj["t"] = t.text;
        tj["v"] = t.vector;
        tokens.push_back(std::move(tj));
      }
      r["tokens"] = std::move(tokens);
      out << r.dump() << '\n';
    }
  }
}

void write_token_vectors(const std::filesystem::path& path, const TokenVectorMap& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  write_token_vectors(out, data);
}

}  // namespace sentorder
