#include "hfirst/model_io.hpp"

#include <charconv>
#include <sstream>

#include "hfirst/aer_io.hpp"
#include "hfirst/errors.hpp"
#include "hfirst/util.hpp"

namespace hfirst {

namespace {

class LineReader {
  public:
    explicit LineReader(const std::string& text) : text_(text) {}

    /// Next line (without terminator), or false at end of input.
    bool next(std::string& line) {
        if (pos_ >= text_.size()) return false;
        std::size_t end = text_.find('\n', pos_);
        if (end == std::string::npos) end = text_.size();
        line.assign(text_, pos_, end - pos_);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        pos_ = end + 1;
        ++lineno_;
        return true;
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw DecodeError("model line " + std::to_string(lineno_) + ": " + what);
    }

    std::string expect(const std::string& what) {
        std::string line;
        if (!next(line)) fail("unexpected end of file, expected " + what);
        return line;
    }

  private:
    const std::string& text_;
    std::size_t pos_ = 0;
    std::size_t lineno_ = 0;
};

std::vector<long long> parse_ints(const std::string& line, LineReader& reader) {
    std::vector<long long> out;
    const char* p = line.data();
    const char* end = p + line.size();
    while (p < end) {
        while (p < end && (*p == ' ' || *p == '\t')) ++p;
        if (p >= end) break;
        long long v = 0;
        auto [next, ec] = std::from_chars(p, end, v);
        if (ec != std::errc{}) reader.fail("expected an integer, got '" + std::string(p, end) + "'");
        out.push_back(v);
        p = next;
    }
    return out;
}

} // namespace

std::string format_model(const TrainedModel& model) {
    std::ostringstream os;
    os << "hfirst-model v1\n";
    os << "digest " << to_hex(model.digest) << '\n';
    os << "geometry " << model.geometry.width << ' ' << model.geometry.height << '\n';
    const int window = model.kernels.empty() ? 8 : model.kernels.front().window;
    const int channels = model.kernels.empty() ? 12 : model.kernels.front().channels;
    os << "kernel " << window << ' ' << channels << '\n';
    os << "classes " << model.kernels.size() << '\n';
    for (const S2Kernel& k : model.kernels) {
        os << "class " << k.label << '\n';
        for (int pos = 0; pos < window * window; ++pos) {
            for (int c = 0; c < channels; ++c) {
                if (c > 0) os << ' ';
                os << k.w[static_cast<std::size_t>(pos * channels + c)];
            }
            os << '\n';
        }
    }
    return os.str();
}

TrainedModel parse_model(const std::string& text) {
    LineReader reader(text);
    std::string line = reader.expect("header");
    if (line != "hfirst-model v1") reader.fail("bad header '" + line + "', expected 'hfirst-model v1'");

    TrainedModel model;

    line = reader.expect("digest");
    if (line.rfind("digest ", 0) != 0) reader.fail("expected 'digest <hex>'");
    {
        const std::string hex = line.substr(7);
        std::uint64_t v = 0;
        auto [p, ec] = std::from_chars(hex.data(), hex.data() + hex.size(), v, 16);
        if (ec != std::errc{} || p != hex.data() + hex.size() || hex.empty()) {
            reader.fail("bad digest '" + hex + "'");
        }
        model.digest = v;
    }

    line = reader.expect("geometry");
    {
        std::istringstream is(line);
        std::string tag;
        int w = 0, h = 0;
        if (!(is >> tag >> w >> h) || tag != "geometry" || w < 1 || h < 1 || w > 0xFFFF || h > 0xFFFF) {
            reader.fail("expected 'geometry <width> <height>'");
        }
        model.geometry = SensorGeometry{static_cast<std::uint16_t>(w), static_cast<std::uint16_t>(h)};
    }

    int window = 0, channels = 0;
    line = reader.expect("kernel shape");
    {
        std::istringstream is(line);
        std::string tag;
        if (!(is >> tag >> window >> channels) || tag != "kernel" || window < 1 || channels < 1) {
            reader.fail("expected 'kernel <window> <channels>'");
        }
    }

    std::size_t nclasses = 0;
    line = reader.expect("class count");
    {
        std::istringstream is(line);
        std::string tag;
        long long n = -1;
        if (!(is >> tag >> n) || tag != "classes" || n < 0) reader.fail("expected 'classes <count>'");
        nclasses = static_cast<std::size_t>(n);
    }

    for (std::size_t ci = 0; ci < nclasses; ++ci) {
        line = reader.expect("'class <label>'");
        if (line.rfind("class ", 0) != 0 || line.size() <= 6) reader.fail("expected 'class <label>'");
        S2Kernel kernel;
        kernel.label = line.substr(6);
        kernel.window = window;
        kernel.channels = channels;
        kernel.w.reserve(static_cast<std::size_t>(window) * window * channels);
        for (int pos = 0; pos < window * window; ++pos) {
            line = reader.expect("a weight row");
            const std::vector<long long> vals = parse_ints(line, reader);
            if (vals.size() != static_cast<std::size_t>(channels)) {
                reader.fail("expected " + std::to_string(channels) + " weights, got " + std::to_string(vals.size()));
            }
            for (long long v : vals) {
                if (v < -32768 || v > 32767) reader.fail("weight " + std::to_string(v) + " out of range");
                kernel.w.push_back(static_cast<std::int16_t>(v));
            }
        }
        model.kernels.push_back(std::move(kernel));
    }

    while (reader.next(line)) {
        if (!line.empty()) reader.fail("trailing content '" + line + "'");
    }
    return model;
}

void save_model(const TrainedModel& model, const std::string& path) { write_file(path, format_model(model)); }

TrainedModel load_model(const std::string& path) {
    try {
        return parse_model(read_file(path));
    } catch (const DecodeError& e) {
        throw DecodeError(path + ": " + e.what());
    }
}

} // namespace hfirst
