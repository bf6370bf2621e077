"""Stack-like tracebacks maintained beside the continuation chain.

The machine keeps a side stack of pending applications.  Frames are pushed
when a closure is entered; they are popped by truncation whenever a value is
delivered to a continuation that was created at a lower stack height.  Tail
calls therefore replace the caller's frame instead of stacking on top of it,
so the trace depth stays bounded for loops.
"""

from .writer import write_value

ARG_TEXT_LIMIT = 60
DEFAULT_MAX_FRAMES = 40


class TraceFrame(tuple):
    """One pending application: (callee label, raw args, line, col, source).

    The callee label and raw argument values are captured at push time;
    rendering to text is deferred until a traceback is actually produced.
    Any plain 5-tuple of the same shape works interchangeably; the machine
    pushes raw tuples on its hot path.
    """

    __slots__ = ()

    def __new__(cls, callee, args, line=None, col=None, source=None):
        return tuple.__new__(cls, (callee, args, line, col, source))

    @property
    def callee(self):
        return self[0]

    @property
    def args(self):
        return tuple(truncate_text(write_value(a)) for a in self[1])

    @property
    def line(self):
        return self[2]

    @property
    def col(self):
        return self[3]

    @property
    def source(self):
        return self[4]

    def call_text(self):
        return frame_call_text(self)


def frame_call_text(frame):
    label, raw_args = frame[0], frame[1]
    parts = [label]
    parts.extend(truncate_text(write_value(a)) for a in raw_args)
    return "(" + " ".join(parts) + ")"


class TraceConfig:
    __slots__ = ("enabled", "max_frames")

    def __init__(self, enabled=True, max_frames=DEFAULT_MAX_FRAMES):
        self.enabled = enabled
        self.max_frames = max_frames


class TraceStack:
    """The frame stack plus its configuration; owned by one machine."""

    __slots__ = ("frames", "config", "high_water")

    def __init__(self, enabled=True):
        self.frames = []
        self.config = TraceConfig(enabled=enabled)
        self.high_water = 0

    def push_frame(self, frame):
        if not self.config.enabled:
            return
        self.frames.append(frame)
        if len(self.frames) > self.high_water:
            self.high_water = len(self.frames)

    def pop_frame(self):
        if self.frames:
            self.frames.pop()

    def truncate(self, depth):
        if len(self.frames) > depth:
            del self.frames[depth:]

    def snapshot(self):
        return tuple(self.frames)

    def restore(self, snap):
        self.frames[:] = snap

    def clear(self):
        self.frames.clear()

    def __len__(self):
        return len(self.frames)


def truncate_text(text, limit=ARG_TEXT_LIMIT):
    if len(text) <= limit:
        return text
    return text[:limit - 3] + "..."


def render_traceback(frames, error, max_frames=DEFAULT_MAX_FRAMES):
    """Render pending frames (most recent call last) plus the error line."""
    lines = []
    frames = tuple(frames)
    if frames:
        lines.append("Traceback (most recent call last):")
        if len(frames) > max_frames:
            lines.append(f"  [{len(frames) - max_frames} frames elided]")
            frames = frames[-max_frames:]
        for frame in frames:
            call = frame_call_text(frame)
            line, col, source = frame[2], frame[3], frame[4]
            if line is not None:
                source = source if source is not None else "<input>"
                lines.append(f'  File "{source}", line {line}, '
                             f'col {col}, in {call}')
            else:
                lines.append(f"  In {call}")
    lines.append(error.error_line())
    return "\n".join(lines)
