#include <bit>
#include <cstring>
#include <type_traits>

#include "blogext/error.hpp"
#include "blogext/svm.hpp"

namespace blogext {

namespace {

constexpr char kMagic[8] = {'B', 'L', 'X', 'S', 'V', 'M', '\0', '\0'};
constexpr std::uint32_t kVersion = 1;

std::uint64_t fnv1a(std::string_view bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

class Writer {
public:
    template <typename T>
    void put(T value)
    {
        static_assert(std::is_arithmetic_v<T>);
        using U = std::conditional_t<sizeof(T) == 8, std::uint64_t,
                                     std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint8_t>>;
        static_assert(sizeof(T) == sizeof(U));
        U bits = 0;
        std::memcpy(&bits, &value, sizeof(T));
        for (std::size_t i = 0; i < sizeof(U); ++i) {
            out_.push_back(static_cast<char>((bits >> (8 * i)) & 0xFF));
        }
    }
    void raw(const char* p, std::size_t n) { out_.append(p, n); }
    std::string& bytes() { return out_; }

private:
    std::string out_;
};

class Reader {
public:
    explicit Reader(std::string_view bytes) : in_(bytes) {}

    template <typename T>
    T get()
    {
        using U = std::conditional_t<sizeof(T) == 8, std::uint64_t,
                                     std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint8_t>>;
        need(sizeof(U));
        U bits = 0;
        for (std::size_t i = 0; i < sizeof(U); ++i) {
            bits |= static_cast<U>(static_cast<unsigned char>(in_[pos_ + i])) << (8 * i);
        }
        pos_ += sizeof(U);
        T value;
        std::memcpy(&value, &bits, sizeof(T));
        return value;
    }
    std::string_view raw(std::size_t n)
    {
        need(n);
        auto s = in_.substr(pos_, n);
        pos_ += n;
        return s;
    }
    void need(std::size_t n) const
    {
        if (in_.size() - pos_ < n) {
            throw Error(ErrorCode::CorruptModel, "model data truncated at byte " + std::to_string(pos_));
        }
    }
    std::size_t remaining() const { return in_.size() - pos_; }

private:
    std::string_view in_;
    std::size_t pos_ = 0;
};

}  // namespace

std::string save_model(const SvmModel& m)
{
    const auto dims = m.dims();
    if (m.standardizer.stds.size() != dims || m.standardizer.constant.size() != dims ||
        m.support_vectors.rows() != m.dual_coefs.size() ||
        (m.support_vectors.rows() > 0 && m.support_vectors.cols() != dims)) {
        throw Error(ErrorCode::DimensionMismatch, "model fields have inconsistent dimensions");
    }
    Writer w;
    w.raw(kMagic, sizeof kMagic);
    w.put<std::uint32_t>(kVersion);
    w.put<std::uint8_t>(static_cast<std::uint8_t>(m.schema));
    w.put<std::int32_t>(m.viewport.width);
    w.put<std::int32_t>(m.viewport.height);
    w.put<std::int64_t>(m.created_unix);
    w.put<std::uint32_t>(static_cast<std::uint32_t>(dims));
    w.put<std::uint32_t>(static_cast<std::uint32_t>(m.dual_coefs.size()));
    w.put(m.gamma);
    w.put(m.c);
    w.put(m.c_positive);
    w.put(m.c_negative);
    w.put(m.bias);
    for (double v : m.standardizer.means) w.put(v);
    for (double v : m.standardizer.stds) w.put(v);
    for (auto f : m.standardizer.constant) w.put<std::uint8_t>(f);
    for (double v : m.support_vectors.data()) w.put(v);
    for (double v : m.dual_coefs) w.put(v);
    w.put<std::uint64_t>(fnv1a(w.bytes()));
    return std::move(w.bytes());
}

SvmModel load_model(std::string_view bytes)
{
    if (bytes.size() < sizeof kMagic + 8 || std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0) {
        throw Error(ErrorCode::CorruptModel, "not a model file");
    }
    const auto body = bytes.substr(0, bytes.size() - 8);
    Reader tail(bytes.substr(bytes.size() - 8));
    if (tail.get<std::uint64_t>() != fnv1a(body)) {
        throw Error(ErrorCode::CorruptModel, "model checksum mismatch");
    }
    Reader r(body);
    r.raw(sizeof kMagic);
    if (const auto version = r.get<std::uint32_t>(); version != kVersion) {
        throw Error(ErrorCode::UnknownVersion, "unsupported model format version " + std::to_string(version));
    }
    SvmModel m;
    const auto schema = r.get<std::uint8_t>();
    if (schema != static_cast<std::uint8_t>(SchemaId::title_v1) &&
        schema != static_cast<std::uint8_t>(SchemaId::body_v1)) {
        throw Error(ErrorCode::UnknownVersion, "unknown feature schema " + std::to_string(schema));
    }
    m.schema = static_cast<SchemaId>(schema);
    m.viewport.width = r.get<std::int32_t>();
    m.viewport.height = r.get<std::int32_t>();
    m.created_unix = r.get<std::int64_t>();
    const auto dims = r.get<std::uint32_t>();
    const auto nsv = r.get<std::uint32_t>();
    if (dims != schema_width(m.schema)) {
        throw Error(ErrorCode::CorruptModel, "model has " + std::to_string(dims) + " dims, schema " +
                                                 std::string(to_string(m.schema)) + " needs " +
                                                 std::to_string(schema_width(m.schema)));
    }
    m.gamma = r.get<double>();
    m.c = r.get<double>();
    m.c_positive = r.get<double>();
    m.c_negative = r.get<double>();
    m.bias = r.get<double>();
    // Exact size check before allocating anything proportional to nsv.
    const std::size_t expected = std::size_t{dims} * 17 + std::size_t{nsv} * (std::size_t{dims} + 1) * 8;
    if (r.remaining() != expected) {
        throw Error(ErrorCode::CorruptModel, "model payload has the wrong length");
    }
    m.standardizer.means.resize(dims);
    m.standardizer.stds.resize(dims);
    m.standardizer.constant.resize(dims);
    for (auto& v : m.standardizer.means) v = r.get<double>();
    for (auto& v : m.standardizer.stds) v = r.get<double>();
    for (auto& f : m.standardizer.constant) f = r.get<std::uint8_t>();
    m.support_vectors = Matrix(nsv, dims);
    for (std::size_t i = 0; i < nsv; ++i) {
        for (std::size_t j = 0; j < dims; ++j) {
            m.support_vectors(i, j) = r.get<double>();
        }
    }
    m.dual_coefs.resize(nsv);
    for (auto& v : m.dual_coefs) v = r.get<double>();
    return m;
}

}  // namespace blogext
