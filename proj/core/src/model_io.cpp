#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include <json.hpp>
#include <zlib.h>

#include "liftnet/neuralnet.hpp"

// Container layout (all integers little-endian):
//   bytes 0..7   magic "LIFTNET1"
//   bytes 8..15  uint64 header length N
//   N bytes      UTF-8 JSON metadata (layer_sizes, activations,
//                standardization vectors, provenance)
//   payload      per layer: weight matrix (row-major out x in) then bias
//                vector, each entry a little-endian IEEE-754 float64
//   4 bytes      uint32 CRC-32 (zlib polynomial) of everything above

static_assert(std::endian::native == std::endian::little,
              "model container assumes a little-endian host");
static_assert(sizeof(double) == 8, "model container assumes 8-byte doubles");

namespace liftnet {

namespace {

constexpr char kMagic[8] = {'L', 'I', 'F', 'T', 'N', 'E', 'T', '1'};

std::uint32_t crc_of(const std::string& bytes) {
    return static_cast<std::uint32_t>(
        crc32(0L, reinterpret_cast<const Bytef*>(bytes.data()),
              static_cast<uInt>(bytes.size())));
}

void append_u64(std::string& out, std::uint64_t v) {
    char buf[8];
    std::memcpy(buf, &v, 8);
    out.append(buf, 8);
}

void append_doubles(std::string& out, const std::vector<double>& v) {
    out.append(reinterpret_cast<const char*>(v.data()), v.size() * sizeof(double));
}

std::string activation_name(Activation a) {
    return a == Activation::relu ? "relu" : "linear";
}

Activation activation_from(const std::string& s) {
    if (s == "relu") return Activation::relu;
    if (s == "linear") return Activation::linear;
    throw format_error("unknown activation '" + s + "'");
}

} // namespace

void save_model(const NetworkParams& net, const std::string& path) {
    net.validate();

    nlohmann::json header;
    header["format_version"] = 1;
    header["layer_sizes"] = net.layer_sizes;
    std::vector<std::string> acts;
    for (Activation a : net.activations) acts.push_back(activation_name(a));
    header["activations"] = acts;
    header["feature_mean"] = net.feature_mean;
    header["feature_std"] = net.feature_std;
    header["target_mean"] = net.target_mean;
    header["target_std"] = net.target_std;
    header["provenance"] = net.provenance;
    const std::string header_text = header.dump();

    std::string blob;
    blob.append(kMagic, sizeof kMagic);
    append_u64(blob, header_text.size());
    blob += header_text;
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
        append_doubles(blob, net.weights[l]);
        append_doubles(blob, net.biases[l]);
    }
    const std::uint32_t crc = crc_of(blob);
    char crc_buf[4];
    std::memcpy(crc_buf, &crc, 4);
    blob.append(crc_buf, 4);

    std::ofstream out(path, std::ios::binary);
    if (!out) throw format_error("cannot write '" + path + "'");
    out.write(blob.data(), static_cast<std::streamsize>(blob.size()));
    out.flush();
    if (!out) throw format_error("write to '" + path + "' failed");
}

NetworkParams load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw format_error("cannot open '" + path + "'");
    std::string blob((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());

    if (blob.size() < sizeof kMagic + 8 + 4)
        throw format_error(path + ": truncated model file");
    if (std::memcmp(blob.data(), kMagic, sizeof kMagic) != 0)
        throw format_error(path + ": not a LIFTNET1 model file");

    std::uint32_t stored_crc = 0;
    std::memcpy(&stored_crc, blob.data() + blob.size() - 4, 4);
    const std::string body = blob.substr(0, blob.size() - 4);
    if (crc_of(body) != stored_crc)
        throw format_error(path + ": checksum mismatch (corrupt or truncated)");

    std::uint64_t header_len = 0;
    std::memcpy(&header_len, blob.data() + 8, 8);
    const std::size_t header_off = sizeof kMagic + 8;
    if (header_off + header_len > body.size())
        throw format_error(path + ": header length exceeds file size");

    nlohmann::json header;
    try {
        header = nlohmann::json::parse(body.substr(header_off, header_len));
    } catch (const nlohmann::json::exception& e) {
        throw format_error(path + ": bad header: " + e.what());
    }

    NetworkParams net;
    try {
        if (header.at("format_version").get<int>() != 1)
            throw format_error(path + ": unsupported format version");
        net.layer_sizes = header.at("layer_sizes").get<std::vector<int>>();
        for (const auto& s : header.at("activations"))
            net.activations.push_back(activation_from(s.get<std::string>()));
        net.feature_mean = header.value("feature_mean", std::vector<double>{});
        net.feature_std = header.value("feature_std", std::vector<double>{});
        net.target_mean = header.value("target_mean", std::vector<double>{});
        net.target_std = header.value("target_std", std::vector<double>{});
        net.provenance = header.value("provenance", std::string{});
    } catch (const nlohmann::json::exception& e) {
        throw format_error(path + ": bad header: " + e.what());
    }

    if (net.layer_sizes.size() < 2)
        throw format_error(path + ": header lists fewer than 2 layers");
    std::size_t n_params = 0;
    for (std::size_t l = 0; l + 1 < net.layer_sizes.size(); ++l) {
        if (net.layer_sizes[l] <= 0 || net.layer_sizes[l + 1] <= 0)
            throw format_error(path + ": non-positive layer width");
        n_params += static_cast<std::size_t>(net.layer_sizes[l]) *
                        static_cast<std::size_t>(net.layer_sizes[l + 1]) +
                    static_cast<std::size_t>(net.layer_sizes[l + 1]);
    }
    const std::size_t payload_off = header_off + header_len;
    if (body.size() - payload_off != n_params * sizeof(double))
        throw format_error(path + ": parameter payload size mismatch");

    const char* cursor = body.data() + payload_off;
    for (std::size_t l = 0; l + 1 < net.layer_sizes.size(); ++l) {
        const auto in_w = static_cast<std::size_t>(net.layer_sizes[l]);
        const auto out_w = static_cast<std::size_t>(net.layer_sizes[l + 1]);
        net.weights.emplace_back(in_w * out_w);
        std::memcpy(net.weights.back().data(), cursor, in_w * out_w * sizeof(double));
        cursor += in_w * out_w * sizeof(double);
        net.biases.emplace_back(out_w);
        std::memcpy(net.biases.back().data(), cursor, out_w * sizeof(double));
        cursor += out_w * sizeof(double);
    }

    try {
        net.validate();
    } catch (const error& e) {
        throw format_error(path + ": " + e.what());
    }
    return net;
}

} // namespace liftnet
