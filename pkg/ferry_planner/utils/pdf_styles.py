"""
PDF styling for planner run summaries.
Slate headers over a light striped table, teal accent rules.
"""

from reportlab.lib import colors
from reportlab.lib.enums import TA_CENTER, TA_LEFT
from reportlab.lib.styles import ParagraphStyle
from reportlab.lib.units import inch
from reportlab.platypus import HRFlowable, Spacer, TableStyle


class PDFColors:
    """Report palette"""
    SLATE = colors.HexColor('#1E293B')
    TEAL = colors.HexColor('#0EA5A4')
    STRIPE = colors.HexColor('#F1F5F9')
    MUTED = colors.HexColor('#64748B')
    TEXT = colors.HexColor('#334155')
    RULE = colors.HexColor('#CBD5E1')
    WHITE = colors.white


def _paragraph(name, size, color=PDFColors.TEXT, bold=False, centered=False, **extra):
    return ParagraphStyle(
        name=name,
        fontName='Helvetica-Bold' if bold else 'Helvetica',
        fontSize=size,
        leading=round(size * 1.25),
        textColor=color,
        alignment=TA_CENTER if centered else TA_LEFT,
        **extra,
    )


class PDFStyles:
    """Paragraph styles of the summary document"""

    @staticmethod
    def get_title_style():
        return _paragraph('SummaryTitle', 20, PDFColors.SLATE, bold=True, centered=True, spaceAfter=10)

    @staticmethod
    def get_subtitle_style():
        return _paragraph('SummarySubtitle', 11, PDFColors.MUTED, centered=True, spaceAfter=12)

    @staticmethod
    def get_section_header_style():
        # section titles sit on a striped band
        return _paragraph('SummarySection', 12, PDFColors.SLATE, bold=True, spaceBefore=12, spaceAfter=8,
                          backColor=PDFColors.STRIPE, borderPadding=(6, 3, 6, 3))

    @staticmethod
    def get_body_style():
        return _paragraph('SummaryBody', 9, spaceAfter=6)


class PDFTableStyles:

    @staticmethod
    def get_standard_table_style():
        """Experiment table: slate header row, striped body, centred cells"""
        return TableStyle([
            ('BACKGROUND', (0, 0), (-1, 0), PDFColors.SLATE),
            ('TEXTCOLOR', (0, 0), (-1, 0), PDFColors.WHITE),
            ('FONTNAME', (0, 0), (-1, 0), 'Helvetica-Bold'),
            ('LINEBELOW', (0, 0), (-1, 0), 2, PDFColors.TEAL),
            ('TEXTCOLOR', (0, 1), (-1, -1), PDFColors.TEXT),
            ('FONTNAME', (0, 1), (-1, -1), 'Helvetica'),
            ('ROWBACKGROUNDS', (0, 1), (-1, -1), [PDFColors.WHITE, PDFColors.STRIPE]),
            ('FONTSIZE', (0, 0), (-1, -1), 8),
            ('ALIGN', (0, 0), (-1, -1), 'CENTER'),
            ('VALIGN', (0, 0), (-1, -1), 'MIDDLE'),
            ('TOPPADDING', (0, 0), (-1, -1), 5),
            ('BOTTOMPADDING', (0, 0), (-1, -1), 5),
            ('GRID', (0, 0), (-1, -1), 0.5, PDFColors.RULE),
        ])

    @staticmethod
    def get_summary_table_style():
        """Two-column key/value box"""
        return TableStyle([
            ('TEXTCOLOR', (0, 0), (-1, -1), PDFColors.TEXT),
            ('FONTNAME', (0, 0), (0, -1), 'Helvetica-Bold'),
            ('FONTNAME', (1, 0), (-1, -1), 'Helvetica'),
            ('FONTSIZE', (0, 0), (-1, -1), 9),
            ('ALIGN', (1, 0), (-1, -1), 'RIGHT'),
            ('TOPPADDING', (0, 0), (-1, -1), 6),
            ('BOTTOMPADDING', (0, 0), (-1, -1), 6),
            ('GRID', (0, 0), (-1, -1), 0.5, PDFColors.RULE),
        ])


class PDFLayoutHelpers:

    @staticmethod
    def create_spacer(height_inches=0.2):
        return Spacer(0, height_inches * inch)

    @staticmethod
    def create_accent_line():
        return HRFlowable(width="100%", thickness=0.5, color=PDFColors.TEAL, spaceBefore=5, spaceAfter=5)


class PDFBranding:
    PRODUCT_NAME = "Ferry Planner"
    REPORT_TITLE = "Experiment Summary"
