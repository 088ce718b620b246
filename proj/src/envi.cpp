#include "hsi/envi.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

namespace hsi {

namespace {

std::string trim(const std::string& s) {
    const char* ws = " \t\r\n\v";
    auto a = s.find_first_not_of(ws);
    if (a == std::string::npos) return "";
    auto b = s.find_last_not_of(ws);
    return s.substr(a, b - a + 1);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

struct HeaderField {
    std::string key;        // original spelling
    std::string key_lower;  // for lookup
    std::string value;      // braces stripped for lists, inner text preserved
    bool is_list = false;
};

// Line-oriented parse with `{ ... }` continuation. Keeps file order.
std::vector<HeaderField> parse_header(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoFailure, "cannot open header " + path.string());

    std::string first;
    if (!std::getline(in, first) || trim(first) != "ENVI")
        throw Error(ErrorCode::ParseError,
                    "missing ENVI magic on first line of " + path.string());

    std::vector<HeaderField> fields;
    std::string line;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == ';') continue;
        auto eq = t.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorCode::ParseError,
                        "line " + std::to_string(lineno) + " has no '=': \"" + t + "\"");
        HeaderField f;
        f.key = trim(t.substr(0, eq));
        f.key_lower = lower(f.key);
        std::string v = trim(t.substr(eq + 1));
        if (!v.empty() && v[0] == '{') {
            f.is_list = true;
            std::string body = v.substr(1);
            while (body.find('}') == std::string::npos) {
                if (!std::getline(in, line))
                    throw Error(ErrorCode::ParseError, "unterminated '{' for key \"" + f.key + "\"");
                ++lineno;
                body += "\n" + line;
            }
            body = body.substr(0, body.find('}'));
            f.value = trim(body);
        } else {
            f.value = v;
        }
        fields.push_back(std::move(f));
    }
    return fields;
}

const HeaderField* find_field(const std::vector<HeaderField>& fields, const std::string& key) {
    for (const auto& f : fields)
        if (f.key_lower == key) return &f;
    return nullptr;
}

std::vector<double> parse_number_list(const std::string& body, const std::string& key) {
    std::vector<double> out;
    std::string item;
    std::stringstream ss(body);
    while (std::getline(ss, item, ',')) {
        std::string t = trim(item);
        if (t.empty()) continue;
        try {
            std::size_t used = 0;
            double v = std::stod(t, &used);
            if (used != t.size()) throw std::invalid_argument(t);
            out.push_back(v);
        } catch (const std::exception&) {
            throw Error(ErrorCode::ParseError, "non-numeric entry \"" + t + "\" in " + key);
        }
    }
    return out;
}

long require_int(const std::vector<HeaderField>& fields, const std::string& key) {
    const HeaderField* f = find_field(fields, key);
    if (!f) throw Error(ErrorCode::MissingField, "header lacks \"" + key + "\"");
    try {
        return std::stol(f->value);
    } catch (const std::exception&) {
        throw Error(ErrorCode::ParseError, "bad integer for \"" + key + "\": " + f->value);
    }
}

std::filesystem::path find_binary(const std::filesystem::path& header_path) {
    std::filesystem::path stem = header_path;
    stem.replace_extension();
    for (const char* ext : {"", ".img", ".dat", ".raw"}) {
        std::filesystem::path candidate = stem;
        candidate += ext;
        if (candidate != header_path && std::filesystem::exists(candidate)) return candidate;
    }
    throw Error(ErrorCode::IoFailure, "no companion binary for " + header_path.string() +
                                          " (tried <stem>, .img, .dat, .raw)");
}

bool host_is_little_endian() { return std::endian::native == std::endian::little; }

template <typename T>
double decode_at(const unsigned char* bytes, std::size_t index, bool swap) {
    T v;
    std::memcpy(&v, bytes + index * sizeof(T), sizeof(T));
    if (swap && sizeof(T) > 1) {
        unsigned char* p = reinterpret_cast<unsigned char*>(&v);
        std::reverse(p, p + sizeof(T));
    }
    return static_cast<double>(v);
}

double decode(const unsigned char* bytes, std::size_t index, int type_code, bool swap) {
    switch (type_code) {
    case 1: return decode_at<std::uint8_t>(bytes, index, swap);
    case 2: return decode_at<std::int16_t>(bytes, index, swap);
    case 4: return decode_at<float>(bytes, index, swap);
    case 5: return decode_at<double>(bytes, index, swap);
    case 12: return decode_at<std::uint16_t>(bytes, index, swap);
    }
    throw Error(ErrorCode::UnsupportedDataType, "data type code " + std::to_string(type_code));
}

template <typename T>
void encode_to(std::vector<unsigned char>& out, std::size_t index, double value, bool swap) {
    T v;
    if constexpr (std::is_integral_v<T>)
        v = static_cast<T>(std::llround(value));
    else
        v = static_cast<T>(value);
    unsigned char tmp[sizeof(T)];
    std::memcpy(tmp, &v, sizeof(T));
    if (swap && sizeof(T) > 1) std::reverse(tmp, tmp + sizeof(T));
    std::memcpy(out.data() + index * sizeof(T), tmp, sizeof(T));
}

void encode(std::vector<unsigned char>& out, std::size_t index, double value, int type_code,
            bool swap) {
    switch (type_code) {
    case 1: encode_to<std::uint8_t>(out, index, value, swap); return;
    case 2: encode_to<std::int16_t>(out, index, value, swap); return;
    case 4: encode_to<float>(out, index, value, swap); return;
    case 5: encode_to<double>(out, index, value, swap); return;
    case 12: encode_to<std::uint16_t>(out, index, value, swap); return;
    }
    throw Error(ErrorCode::UnsupportedDataType, "data type code " + std::to_string(type_code));
}

// flat sample index in the on-disk interleave
std::size_t disk_index(Interleave il, std::size_t r, std::size_t c, std::size_t b,
                       std::size_t lines, std::size_t samples, std::size_t bands) {
    (void)lines;
    switch (il) {
    case Interleave::BSQ: return (b * lines + r) * samples + c;
    case Interleave::BIL: return (r * bands + b) * samples + c;
    case Interleave::BIP: return (r * samples + c) * bands + b;
    }
    return 0;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// keys the reader maps onto dedicated MetadataRecord / cube fields
bool is_known_key(const std::string& key_lower) {
    static const char* known[] = {"samples", "lines", "bands", "data type", "interleave",
                                  "byte order", "header offset", "wavelength", "fwhm",
                                  "sensor type", "acquisition time", "description",
                                  "file type", "wavelength units", "data quantity"};
    for (const char* k : known)
        if (key_lower == k) return true;
    return false;
}

} // namespace

bool envi_data_type_supported(int code) {
    return code == 1 || code == 2 || code == 4 || code == 5 || code == 12;
}

std::size_t envi_element_size(int code) {
    switch (code) {
    case 1: return 1;
    case 2: return 2;
    case 4: return 4;
    case 5: return 8;
    case 12: return 2;
    }
    throw Error(ErrorCode::UnsupportedDataType, "data type code " + std::to_string(code));
}

HyperCube read_envi(const std::filesystem::path& header_path) {
    auto fields = parse_header(header_path);

    const std::size_t samples = static_cast<std::size_t>(require_int(fields, "samples"));
    const std::size_t lines = static_cast<std::size_t>(require_int(fields, "lines"));
    const std::size_t bands = static_cast<std::size_t>(require_int(fields, "bands"));
    const int type_code = static_cast<int>(require_int(fields, "data type"));
    const HeaderField* ilf = find_field(fields, "interleave");
    if (!ilf) throw Error(ErrorCode::MissingField, "header lacks \"interleave\"");

    if (!envi_data_type_supported(type_code))
        throw Error(ErrorCode::UnsupportedDataType,
                    "data type code " + std::to_string(type_code) +
                        " (supported: 1, 2, 4, 5, 12)");

    Interleave il;
    std::string ils = lower(ilf->value);
    if (ils == "bsq") il = Interleave::BSQ;
    else if (ils == "bil") il = Interleave::BIL;
    else if (ils == "bip") il = Interleave::BIP;
    else throw Error(ErrorCode::ParseError, "unknown interleave \"" + ilf->value + "\"");

    ByteOrder order = ByteOrder::LittleEndian;
    if (const HeaderField* f = find_field(fields, "byte order"))
        order = (trim(f->value) == "1") ? ByteOrder::BigEndian : ByteOrder::LittleEndian;

    std::size_t header_offset = 0;
    if (const HeaderField* f = find_field(fields, "header offset"))
        header_offset = static_cast<std::size_t>(std::stol(f->value));

    const std::filesystem::path bin_path = find_binary(header_path);
    std::ifstream bin(bin_path, std::ios::binary);
    if (!bin) throw Error(ErrorCode::IoFailure, "cannot open binary " + bin_path.string());
    bin.seekg(0, std::ios::end);
    const std::size_t file_size = static_cast<std::size_t>(bin.tellg());
    const std::size_t elem = envi_element_size(type_code);
    const std::size_t expected = samples * lines * bands * elem;
    if (file_size < header_offset || file_size - header_offset != expected)
        throw Error(ErrorCode::SizeMismatch,
                    bin_path.string() + " holds " + std::to_string(file_size - std::min(file_size, header_offset)) +
                        " payload bytes, expected " + std::to_string(expected) + " (" +
                        std::to_string(samples) + "x" + std::to_string(lines) + "x" +
                        std::to_string(bands) + " x " + std::to_string(elem) + ")");
    bin.seekg(static_cast<std::streamoff>(header_offset), std::ios::beg);
    std::vector<unsigned char> raw(expected);
    bin.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(expected));
    if (!bin) throw Error(ErrorCode::IoFailure, "short read on " + bin_path.string());

    const bool swap = (order == ByteOrder::BigEndian) == host_is_little_endian();

    // wavelengths
    SpectralAxis axis;
    bool synthesized_axis = false;
    if (const HeaderField* f = find_field(fields, "wavelength")) {
        axis.wavelengths = parse_number_list(f->value, "wavelength");
        if (axis.wavelengths.size() != bands)
            throw Error(ErrorCode::ParseError,
                        "wavelength list has " + std::to_string(axis.wavelengths.size()) +
                            " entries for " + std::to_string(bands) + " bands");
    } else {
        axis = SpectralAxis::index_axis(bands);
        synthesized_axis = true;
    }
    if (const HeaderField* f = find_field(fields, "fwhm")) {
        axis.fwhm = parse_number_list(f->value, "fwhm");
        if (axis.fwhm.size() != bands)
            throw Error(ErrorCode::ParseError, "fwhm list length mismatch");
    }

    // "data quantity" is this toolkit's own key; foreign cubes default to raw counts
    Quantity quantity = Quantity::DigitalNumber;
    if (const HeaderField* f = find_field(fields, "data quantity")) {
        std::string q = lower(trim(f->value));
        if (q == "reflectance") quantity = Quantity::Reflectance;
        else if (q == "radiance") quantity = Quantity::Radiance;
    }

    HyperCube cube(lines, samples, bands, quantity, axis);
    for (std::size_t r = 0; r < lines; ++r)
        for (std::size_t c = 0; c < samples; ++c)
            for (std::size_t b = 0; b < bands; ++b)
                cube.at(r, c, b) =
                    decode(raw.data(), disk_index(il, r, c, b, lines, samples, bands), type_code, swap);

    MetadataRecord& md = cube.metadata();
    md.interleave = il;
    md.data_type_code = type_code;
    md.byte_order = order;
    if (const HeaderField* f = find_field(fields, "sensor type")) md.sensor_name = f->value;
    if (const HeaderField* f = find_field(fields, "acquisition time")) md.acquisition_time = f->value;
    if (const HeaderField* f = find_field(fields, "description")) md.description = f->value;
    if (synthesized_axis) md.set_extra("wavelength synthesized", "true");
    for (const auto& f : fields)
        if (!is_known_key(f.key_lower))
            md.extra.emplace_back(f.key, f.is_list ? "{" + f.value + "}" : f.value);

    return cube;
}

void write_envi(const HyperCube& cube, const std::filesystem::path& stem, Interleave interleave,
                int data_type_code, ByteOrder byte_order) {
    if (!envi_data_type_supported(data_type_code))
        throw Error(ErrorCode::UnsupportedDataType, "data type code " + std::to_string(data_type_code));

    const std::size_t lines = cube.height();
    const std::size_t samples = cube.width();
    const std::size_t bands = cube.bands();
    const std::size_t elem = envi_element_size(data_type_code);
    const bool swap = (byte_order == ByteOrder::BigEndian) == host_is_little_endian();

    std::filesystem::path hdr = stem;
    hdr += ".hdr";
    std::filesystem::path img = stem;
    img += ".img";

    std::ofstream out(hdr);
    if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + hdr.string());
    out << "ENVI\n";
    const MetadataRecord& md = cube.metadata();
    if (!md.description.empty()) out << "description = {" << md.description << "}\n";
    out << "samples = " << samples << "\n";
    out << "lines = " << lines << "\n";
    out << "bands = " << bands << "\n";
    out << "header offset = 0\n";
    out << "file type = ENVI Standard\n";
    out << "data type = " << data_type_code << "\n";
    out << "interleave = " << to_string(interleave) << "\n";
    out << "byte order = " << (byte_order == ByteOrder::BigEndian ? 1 : 0) << "\n";
    if (!md.sensor_name.empty()) out << "sensor type = " << md.sensor_name << "\n";
    if (md.acquisition_time) out << "acquisition time = " << *md.acquisition_time << "\n";
    out << "data quantity = ";
    switch (cube.quantity()) {
    case Quantity::DigitalNumber: out << "digital number\n"; break;
    case Quantity::Radiance: out << "radiance\n"; break;
    case Quantity::Reflectance: out << "reflectance\n"; break;
    }
    out << "wavelength units = Nanometers\n";
    out << "wavelength = {";
    for (std::size_t b = 0; b < bands; ++b)
        out << (b ? ", " : " ") << format_double(cube.axis().wavelengths[b]);
    out << " }\n";
    if (!cube.axis().fwhm.empty()) {
        out << "fwhm = {";
        for (std::size_t b = 0; b < bands; ++b)
            out << (b ? ", " : " ") << format_double(cube.axis().fwhm[b]);
        out << " }\n";
    }
    for (const auto& [k, v] : md.extra) out << k << " = " << v << "\n";
    out.close();
    if (!out) throw Error(ErrorCode::IoFailure, "short write on " + hdr.string());

    std::vector<unsigned char> raw(lines * samples * bands * elem);
    for (std::size_t r = 0; r < lines; ++r)
        for (std::size_t c = 0; c < samples; ++c)
            for (std::size_t b = 0; b < bands; ++b)
                encode(raw, disk_index(interleave, r, c, b, lines, samples, bands),
                       cube.at(r, c, b), data_type_code, swap);

    std::ofstream bin(img, std::ios::binary);
    if (!bin) throw Error(ErrorCode::IoFailure, "cannot write " + img.string());
    bin.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    bin.close();
    if (!bin) throw Error(ErrorCode::IoFailure, "short write on " + img.string());
}

} // namespace hsi
